#include "edgerec/quadrature.hpp"

#include <stdexcept>
#include <string>

namespace edgerec {

namespace {

void add_orbit3(std::vector<QuadPoint>& q, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  q.push_back({{a, a, b}, w});
  q.push_back({{a, b, a}, w});
  q.push_back({{b, a, a}, w});
}

void add_orbit6(std::vector<QuadPoint>& q, double a, double b, double w) {
  const double c = 1.0 - a - b;
  q.push_back({{a, b, c}, w});
  q.push_back({{a, c, b}, w});
  q.push_back({{b, a, c}, w});
  q.push_back({{b, c, a}, w});
  q.push_back({{c, a, b}, w});
  q.push_back({{c, b, a}, w});
}

}  // namespace

std::vector<QuadPoint> triangle_quadrature(int order) {
  std::vector<QuadPoint> q;
  switch (order) {
    case 1:
      q.push_back({{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 1.0});
      break;
    case 2:
      // edge midpoints
      q.push_back({{0.5, 0.5, 0.0}, 1.0 / 3.0});
      q.push_back({{0.0, 0.5, 0.5}, 1.0 / 3.0});
      q.push_back({{0.5, 0.0, 0.5}, 1.0 / 3.0});
      break;
    case 3:
      // Strang-Fix, six points, positive weights
      add_orbit6(q, 0.659027622374092, 0.231933368553031, 1.0 / 6.0);
      break;
    case 4:
      // Dunavant degree 4
      add_orbit3(q, 0.445948490915965, 0.223381589678011);
      add_orbit3(q, 0.091576213509771, 0.109951743655322);
      break;
    case 6:
      // Dunavant degree 6
      add_orbit3(q, 0.249286745170910, 0.116786275726379);
      add_orbit3(q, 0.063089014491502, 0.050844906370207);
      add_orbit6(q, 0.053145049844817, 0.310352451033784, 0.082851075618374);
      break;
    default:
      throw std::invalid_argument("unsupported quadrature order " + std::to_string(order) +
                                  " (supported: 1, 2, 3, 4, 6)");
  }
  return q;
}

}  // namespace edgerec
