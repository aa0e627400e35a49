#pragma once

// Deterministic, seeded generators for the three experiment families, plus
// the metric row shared by every solver report.

#include <cstdint>
#include <string>
#include <vector>

#include "fal/problem.hpp"

namespace fal {

enum class Family { Dct100db, GaussianNoisy, HardMagnitude };

struct MagnitudeTerm {
  double magnitude;
  int count;
};

struct SignalSpec {
  int n = 0, m = 0, s = 0;
  Family family = Family::Dct100db;
  double snr_db = std::numeric_limits<double>::infinity();
  std::vector<MagnitudeTerm> plan;  // hard-magnitude family only
  std::uint64_t seed = 0;
};

// Sparse +-10^[0,5] signal (dynamic range exactly 100 dB), partial-DCT rows.
ProblemInstance gen_noiseless(const SignalSpec& spec);

// Gaussian signal entries, dense standard Gaussian A, additive noise with
// rho^2 = s * 10^(-SNR/10); records rho and the default denoising radius
// delta = sqrt(m + 2 sqrt(2m)) * rho.
ProblemInstance gen_noisy(const SignalSpec& spec);

// Exact magnitudes per plan with random signs, partial-DCT rows, noiseless.
ProblemInstance gen_hard(const SignalSpec& spec);

// Dispatch on spec.family.
ProblemInstance generate(const SignalSpec& spec);

// Error metrics against the instance's ground truth; no thresholding of
// x_sol anywhere. Residual uses an uncounted operator application.
MetricRow evaluate(const Vector& x_sol, const ProblemInstance& instance);

std::string family_name(Family family);
Family family_from_name(const std::string& name);

}  // namespace fal
