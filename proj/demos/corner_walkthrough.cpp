// Builds a matrix whose numerical range has a corner, finds the corner,
// certifies it as a reducing eigenvalue and splits it off.
//
//   corner_walkthrough [seed]

#include <cstdio>
#include <cstdlib>

#include "numrange/numrange.hpp"

using namespace numrange;

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 3;
  const auto spec = parse_gallery_spec("corner:0.5+0.25i,1,(random:4)", seed);
  const auto t = materialize(spec);
  std::printf("operator %s, n = %zu, seed %llu\n", to_string(spec).c_str(), t.rows(),
              static_cast<unsigned long long>(seed));

  const auto curve = boundary_curve(t, 720);
  std::printf("numerical radius %.12f\n", numerical_radius(curve));

  const auto corners = corner_reducing_check(t, 720);
  if (corners.empty()) {
    std::printf("no corners found\n");
    return 1;
  }
  for (const auto& c : corners) {
    std::printf("corner %s: normal cone width %.6f, reducing dimension %zu, residual %.3g\n",
                format_complex(c.lam).c_str(), c.classification.normal_cone_width, c.certificate.dimension,
                c.certificate.max_residual);
    const auto rest = deflate(t, c.certificate);
    std::printf("  compression to the orthogonal complement: n = %zu, defect %.3g\n", rest.rows(),
                deflation_defect(t, c.certificate));
  }

  // A vector sequence closing in on the reducing vector: the off-diagonal
  // parts |beta| + |gamma| shrink with it.
  const auto& c = corners.front();
  const auto sf = SupportFunction(t);
  const auto loc = locate_on_boundary(sf, c.lam, Thresholds{}, 720);
  const auto std_t = to_standard_position(t, c.lam, -kPi / 2 - loc.normal());
  const auto seq = spherical_sequence(random_unit_vector(t.rows(), seed + 1000), c.certificate.basis.front(), 12);
  const auto tr = proof_trace(std_t, seq, TraceMode::TwoSided);
  std::printf("%4s %14s %14s %14s\n", "step", "|delta|", "|beta|", "|gamma|");
  for (const auto& s : tr.steps)
    std::printf("%4zu %14.6g %14.6g %14.6g\n", s.n, std::abs(s.delta), std::abs(s.beta), std::abs(s.gamma));
  std::printf("decay ratio %.3g\n", tr.decay_ratio);
  return 0;
}
