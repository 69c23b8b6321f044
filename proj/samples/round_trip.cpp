// Spectral data of a small peakon pair and its reconstruction.
#include <chspec/chspec.hpp>

#include <cstdio>

int main() {
  using namespace chspec;
  PeakonPair pair({-1.0, 0.5, 2.0}, {1.0, -0.4, 0.7}, {0.0, 0.6, 0.0});

  SpectralData sd = spectral_data(pair);
  std::printf("%-12s %-12s %-12s %-12s\n", "lambda", "kappa", "gamma2_left", "gamma2_right");
  for (std::size_t i = 0; i < sd.size(); ++i) {
    std::printf("% -12.6f % -12.6f % -12.6g % -12.6g\n", sd.eigenvalues[i], sd.kappa[i], sd.norming_left[i],
                sd.norming_right[i]);
  }

  auto tr = trace_formulas(pair);
  std::printf("trace residuals: %.2e %.2e\n", tr.first, tr.second);

  InverseReport rep;
  PeakonPair back = spectral_round_trip(pair, {}, &rep);
  std::printf("reconstructed at %d bits, self-check %.2e\n", rep.precision_bits, rep.round_trip_residual);
  for (std::size_t j = 0; j < back.size(); ++j) {
    std::printf("  x=% .12f  p=% .12f  h=%.12f\n", back.sites()[j], back.weights()[j], back.atoms()[j]);
  }
}
