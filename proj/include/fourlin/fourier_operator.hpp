#pragma once

// Operators diagonal in the Fourier basis, T v = sum_{|m|_inf <= K} lambda_m <phi_{-m}, v> phi_m,
// with |lambda_m| <= C. Coefficients are stored for every mode of the box
// {-K..K}^d in lexicographic order (last axis fastest); modes outside the
// box act as zero.

#include <cstdint>
#include <functional>
#include <vector>

#include "fourlin/grid.hpp"
#include "fourlin/random_fields.hpp"

namespace fourlin {

class DiagonalOperator {
 public:
  DiagonalOperator() = default;
  // Zero operator.
  DiagonalOperator(int d, std::int64_t K, double C, bool real_output = true);
  // Validates |lambda| <= C (with 1e-12 slack) and, when real_output is set,
  // conjugate symmetry lambda_{-m} = conj(lambda_m) to 1e-12.
  DiagonalOperator(int d, std::int64_t K, double C, std::vector<cplx> lambdas, bool real_output);

  int dim() const noexcept { return d_; }
  std::int64_t K() const noexcept { return K_; }
  double C() const noexcept { return C_; }
  bool real_output() const noexcept { return real_output_; }

  // (2K+1)^d
  std::size_t mode_count() const noexcept { return lambdas_.size(); }
  const std::vector<cplx>& lambdas() const noexcept { return lambdas_; }

  // Lexicographic box position <-> mode.
  Mode mode_at(std::size_t pos) const;
  std::size_t position_of(const Mode& m) const;  // requires |m|_inf <= K
  bool contains(const Mode& m) const;

  // lambda_m, zero outside the box.
  cplx lambda(const Mode& m) const;

  // Multiplier laid out on a grid spectrum: lambda at each box mode, zero
  // elsewhere. Requires N > 2K.
  std::vector<cplx> grid_multiplier(const GridSpec& spec) const;

  double max_abs_lambda() const;
  // max_m |lambda_{-m} - conj(lambda_m)|
  double conjugate_defect() const;

 private:
  int d_ = 1;
  std::int64_t K_ = 0;
  double C_ = 1.0;
  bool real_output_ = true;
  std::vector<cplx> lambdas_;
};

// (2K+1)^d
std::size_t box_mode_count(int d, std::int64_t K);

// Iterates the box {-K..K}^d in lexicographic order.
std::vector<Mode> box_modes(int d, std::int64_t K);

// Flat grid index of every box mode, in box order. Requires N > 2K.
std::vector<std::size_t> box_flat_indices(const GridSpec& spec, std::int64_t K);

// Position in the K_outer box of every mode of the K box, in K-box order.
std::vector<std::size_t> sub_box_positions(int d, std::int64_t K, std::int64_t K_outer);

void require_resolution(const GridSpec& spec, std::int64_t K);

// FFT, multiply by lambda on |m|_inf <= K, inverse FFT.
GridField apply(const DiagonalOperator& T, const GridField& v);
std::vector<cplx> apply_complex(const DiagonalOperator& T, const GridField& v);

// Term-by-term evaluation of the mode sum at every grid point; oracle.
GridField apply_direct(const DiagonalOperator& T, const GridField& v,
                       std::size_t cap = 4096);

// lambda_m ~ Uniform(-bound, bound), real. With real_output the draw covers
// one half of the box and is mirrored, lambda_{-m} = lambda_m.
DiagonalOperator synthesize_random_operator(int d, std::int64_t K, double bound, std::uint64_t seed,
                                            bool real_output = true);

// exp(tau Laplacian): lambda_m = exp(-4 pi^2 tau |m|_2^2), C = 1.
DiagonalOperator heat_operator(int d, double tau, std::int64_t K);

struct Dataset {
  GridSpec spec;
  std::vector<GridField> inputs;
  std::vector<GridField> outputs;

  std::size_t size() const noexcept { return inputs.size(); }
  void validate() const;
};

struct PairRecipe {
  DiagonalOperator target;
  GrfConfig input;  // input.seed is ignored; seeds derive from the dataset seed
  bool noise = true;
};

// Pair i of a dataset drawn with `seed`; independent of every other pair.
std::pair<GridField, GridField> generate_pair(const PairRecipe& recipe, std::uint64_t seed, std::size_t i);

// v_i ~ GRF, w_i = T v_i (+ noise). Parallel over i, deterministic in seed.
Dataset generate_dataset(const DiagonalOperator& target, const GrfConfig& grf, bool noise, std::size_t n,
                         std::uint64_t seed);

// Values at the coarse points j / coarse of a field on a finer grid.
GridField restrict_to_grid(const GridField& u, std::int64_t coarse);
std::vector<cplx> restrict_to_grid(const GridSpec& fine, std::span<const cplx> values, std::int64_t coarse);

}  // namespace fourlin
