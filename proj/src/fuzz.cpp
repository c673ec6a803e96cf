#include "weylcalc/fuzz.hpp"

#include <cstddef>

namespace weyl {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double uniform_from(std::uint64_t seed, std::uint64_t index, double lo,
                    double hi) {
  std::uint64_t h = splitmix64(splitmix64(seed) + index * 0x9E3779B97F4A7C15ULL);
  double unit = static_cast<double>(h >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

FuzzedManifold fuzz_manifold(int n, std::uint64_t seed) {
  std::vector<std::string> coord_names;
  const char* names4[] = {"x", "y", "z", "w"};
  for (int i = 0; i < n; ++i) coord_names.push_back(names4[i]);
  auto names = ScalarField::make_names(coord_names);

  auto c = [&](double v) { return ScalarField::constant(v, names); };
  auto xi = [&](int i) { return ScalarField::coordinate(i, names); };
  std::uint64_t idx = 0;
  auto draw = [&](double lo, double hi) {
    return uniform_from(seed, idx++, lo, hi);
  };

  std::vector<std::vector<ScalarField>> g(
      static_cast<std::size_t>(n),
      std::vector<ScalarField>(static_cast<std::size_t>(n), c(0.0)));
  for (int i = 0; i < n; ++i) {
    double a = draw(0.6, 1.6);
    double b = draw(0.0, 0.8);
    g[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] =
        c(a) + c(b) * xi(i) * xi(i);
  }

  std::vector<ScalarField> T;
  for (int k = 0; k < n; ++k)
    T.push_back(c(draw(-0.3, 0.3)) + c(draw(-0.3, 0.3)) * xi(k));

  // S = d(potential) with potential = sum_i (a_i x_i + b_i x_i^2); closed by
  // construction, which keeps the generated mapping admissible below.
  std::vector<double> sa, sb;
  for (int i = 0; i < n; ++i) {
    sa.push_back(draw(-0.3, 0.3));
    sb.push_back(draw(-0.3, 0.3));
  }
  std::vector<ScalarField> S;
  for (int i = 0; i < n; ++i)
    S.push_back(c(sa[static_cast<std::size_t>(i)]) +
                c(2.0 * sb[static_cast<std::size_t>(i)]) * xi(i));

  FuzzedManifold out{
      WeylManifold(coord_names, std::move(g), std::move(T), S), {}};

  // P = cS with closed S keeps the underlined deformation tensor symmetric;
  // Q = P makes the mapping concircular.
  double pc = draw(-0.8, 0.8);
  for (int i = 0; i < n; ++i)
    out.mapping.P.push_back(c(pc) * S[static_cast<std::size_t>(i)]);
  out.mapping.Q = out.mapping.P;
  return out;
}

std::vector<Point> sample_points(
    int n, const std::vector<std::pair<double, double>>& box, int count,
    std::uint64_t seed) {
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int p = 0; p < count; ++p) {
    Point pt;
    for (int i = 0; i < n; ++i) {
      const auto& b = box[static_cast<std::size_t>(i)];
      pt.coords.push_back(uniform_from(
          seed, static_cast<std::uint64_t>(p) * 64u + static_cast<std::uint64_t>(i),
          b.first, b.second));
    }
    pts.push_back(std::move(pt));
  }
  return pts;
}

}  // namespace weyl
