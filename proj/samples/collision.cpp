// A peakon meets an antipeakon; at the collision time their energy
// concentrates into a single point mass.
#include <chspec/chspec.hpp>

#include <cmath>
#include <cstdio>

int main() {
  using namespace chspec;
  PeakonPair pair({-1.0, 1.0}, {1.0, -1.0}, {0.0, 0.0});
  Flow flow(pair);

  const SpectralData& sd = flow.spectral();
  // Sites meet when the two shifted kappa values coincide.
  const double tc = (sd.kappa[0] - sd.kappa[1]) * sd.eigenvalues[1];
  std::printf("eigenvalues % .6f % .6f, collision at t = %.6f\n", sd.eigenvalues[0], sd.eigenvalues[1], tc);

  for (double t : {0.0, 0.5, 1.0, 1.5, tc, 2.5, 4.0}) {
    PeakonPair s = flow.at(t);
    std::printf("t=%6.3f", t);
    for (std::size_t j = 0; j < s.size(); ++j) {
      std::printf("  (x=% .4f p=% .4f h=%.4f)", s.sites()[j], s.weights()[j], s.atoms()[j]);
    }
    std::printf("  mu=%.12f\n", mu_total(s));
  }
}
