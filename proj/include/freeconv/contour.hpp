#pragma once

#include <cmath>
#include <span>
#include <variant>
#include <vector>

#include "freeconv/errors.hpp"
#include "freeconv/types.hpp"

namespace freeconv {

struct Segment {
  Complex start, end;
  Complex at(double t) const { return start + t * (end - start); }
  Complex deriv() const { return end - start; }
  double length() const { return std::abs(end - start); }
};

// Circular arc, angles in radians; theta runs linearly from angle0 to angle1
// (angle1 < angle0 traverses clockwise).
struct Arc {
  Complex center;
  double radius;
  double angle0, angle1;
  Complex at(double t) const {
    double th = angle0 + t * (angle1 - angle0);
    return center + radius * Complex{std::cos(th), std::sin(th)};
  }
  Complex deriv(double t) const {
    double th = angle0 + t * (angle1 - angle0);
    return radius * (angle1 - angle0) * Complex{-std::sin(th), std::cos(th)};
  }
  double length() const { return radius * std::abs(angle1 - angle0); }
};

using Piece = std::variant<Segment, Arc>;

inline Complex piece_start(const Piece& p) {
  if (auto* s = std::get_if<Segment>(&p)) return s->start;
  return std::get<Arc>(p).at(0.0);
}
inline Complex piece_end(const Piece& p) {
  if (auto* s = std::get_if<Segment>(&p)) return s->end;
  return std::get<Arc>(p).at(1.0);
}
inline double piece_length(const Piece& p) {
  if (auto* s = std::get_if<Segment>(&p)) return s->length();
  return std::get<Arc>(p).length();
}

// Piecewise path of line segments and circular arcs. Consecutive pieces must
// share endpoints to 1e-12; a path whose last end meets its first start is
// closed.
class Contour {
 public:
  Contour() = default;
  explicit Contour(std::vector<Piece> pieces) : pieces_(std::move(pieces)) { validate(); }

  static Contour circle(Complex center, double radius, bool anticlockwise = true) {
    double a0 = 0.0, a1 = anticlockwise ? 2.0 * kPi : -2.0 * kPi;
    return Contour({Arc{center, radius, a0, a1}});
  }

  static Contour polyline(std::span<const Complex> points) {
    std::vector<Piece> ps;
    ps.reserve(points.size() > 0 ? points.size() - 1 : 0);
    for (size_t i = 0; i + 1 < points.size(); ++i) {
      if (std::abs(points[i + 1] - points[i]) == 0.0) continue;
      ps.push_back(Segment{points[i], points[i + 1]});
    }
    return Contour(std::move(ps));
  }

  void append(Piece p) {
    pieces_.push_back(std::move(p));
    validate();
  }

  const std::vector<Piece>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }

  double length() const {
    double L = 0.0;
    for (const auto& p : pieces_) L += piece_length(p);
    return L;
  }

  bool is_closed() const {
    if (pieces_.empty()) return false;
    return std::abs(piece_start(pieces_.front()) - piece_end(pieces_.back())) <= kJoinTol;
  }

  Contour reversed() const {
    std::vector<Piece> rev;
    rev.reserve(pieces_.size());
    for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
      if (auto* s = std::get_if<Segment>(&*it)) {
        rev.push_back(Segment{s->end, s->start});
      } else {
        const Arc& a = std::get<Arc>(*it);
        rev.push_back(Arc{a.center, a.radius, a.angle1, a.angle0});
      }
    }
    return Contour(std::move(rev));
  }

  static constexpr double kJoinTol = 1e-12;

 private:
  void validate() const {
    for (size_t i = 0; i + 1 < pieces_.size(); ++i) {
      double gap = std::abs(piece_end(pieces_[i]) - piece_start(pieces_[i + 1]));
      if (gap > kJoinTol)
        throw InvalidConfigError("contour pieces " + std::to_string(i) + "," +
                                 std::to_string(i + 1) + " do not join (gap " +
                                 fmt_double(gap) + ")");
    }
  }

  std::vector<Piece> pieces_;
};

struct QuadratureConfig {
  int panels_per_piece = 8;   // initial subdivision of each piece
  double abs_tol = 1e-10;     // absolute tolerance for the whole integral
  int max_refinements = 28;   // adaptive bisection depth per panel

  void validate() const {
    if (panels_per_piece < 4) throw InvalidConfigError("panels_per_piece must be >= 4");
    if (!(abs_tol > 0)) throw InvalidConfigError("abs_tol must be > 0");
  }
};

}  // namespace freeconv
