// Dropping large eigenvalues gives a sequence of simpler pairs that
// approaches the original one.
#include <chspec/chspec.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

int main() {
  using namespace chspec;
  PeakonPair pair({-2.0, -0.7, 0.4, 1.8}, {0.8, 1.3, 0.5, 1.1}, {0.0, 0.0, 0.0, 0.0});
  Flow flow(pair);

  std::vector<double> mags;
  for (double l : flow.spectral().eigenvalues) mags.push_back(std::abs(l));
  std::sort(mags.begin(), mags.end());

  for (double k : mags) {
    PeakonPair pk = flow.truncated(k * (1 + 1e-12));
    std::printf("k=%8.4f  sites=%zu  metric=%.4e\n", k, pk.size(), continuity_metric(pk, pair));
  }
}
