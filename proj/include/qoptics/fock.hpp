#pragma once

#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qoptics/errors.hpp"
#include "qoptics/linalg.hpp"

namespace qoptics {

// Photon number per mode, in mode declaration order.
using Occupation = std::vector<int>;

// Truncated multimode Fock basis. Each mode holds 0..cutoff-1 photons; states
// are indexed big-endian over modes, so mode 0 is the most significant digit
// and |abcd⟩ reads off directly as a mixed-radix number.
class FockBasis {
 public:
  FockBasis(int num_modes, int cutoff);

  int num_modes() const noexcept { return num_modes_; }
  int cutoff() const noexcept { return cutoff_; }
  Index dim() const noexcept { return dim_; }

  // Index distance between neighbouring occupations of `mode`.
  Index stride(int mode) const;
  int occupation(Index index, int mode) const;

  Index index(std::span<const int> occupations) const;
  Occupation state(Index index) const;

  bool operator==(const FockBasis&) const = default;

 private:
  int num_modes_;
  int cutoff_;
  Index dim_;
};

Index basis_index(std::span<const int> occupations, const FockBasis& basis);
Occupation basis_state(Index index, const FockBasis& basis);

// "|0101⟩"-style label of an occupation tuple. Occupations above 9 are
// comma-separated.
std::string ket_label(std::span<const int> occupations);

class FockVector {
 public:
  FockVector(FockBasis basis, CVector amplitudes);

  static FockVector basis_vector(const FockBasis& basis, std::span<const int> occupations);
  static FockVector vacuum(const FockBasis& basis);

  const FockBasis& basis() const noexcept { return basis_; }
  const CVector& amplitudes() const noexcept { return amps_; }
  Complex amplitude(std::span<const int> occupations) const;
  double norm() const { return amps_.norm(); }

 private:
  FockBasis basis_;
  CVector amps_;
};

class DensityOp {
 public:
  DensityOp(FockBasis basis, CMatrix matrix);

  static DensityOp from_pure(const FockVector& v);

  const FockBasis& basis() const noexcept { return basis_; }
  const CMatrix& matrix() const noexcept { return mat_; }
  Complex trace() const { return mat_.trace(); }
  double purity() const { return (mat_ * mat_).trace().real(); }
  double min_eigenvalue() const;

 private:
  FockBasis basis_;
  CMatrix mat_;
};

using State = std::variant<FockVector, DensityOp>;

const FockBasis& basis_of(const State& s);
DensityOp to_density(const State& s);

// Photon-count statistics over all modes.
class OutcomeDist {
 public:
  using Map = std::map<Occupation, double>;

  OutcomeDist() = default;
  explicit OutcomeDist(Map entries);

  const Map& entries() const noexcept { return entries_; }
  double probability(const Occupation& outcome) const;
  double total() const;
  int num_modes() const;
  // Distribution of the count in one mode, indexed by photon number.
  std::vector<double> marginal(int mode) const;

 private:
  Map entries_;
};

double total_variation(std::span<const double> p, std::span<const double> q);

// Lifts `local`, acting on `target_modes` in the listed order, to the full
// space (identity on every other mode).
CMatrix embed_operator(const CMatrix& local, std::span<const int> target_modes,
                       const FockBasis& basis);

// Precomputed index arithmetic for applying a k-mode operator in place.
class LocalIndexer {
 public:
  LocalIndexer(const FockBasis& basis, std::span<const int> target_modes);

  Index local_dim() const noexcept { return static_cast<Index>(offsets_.size()); }
  const std::vector<Index>& offsets() const noexcept { return offsets_; }
  const std::vector<Index>& bases() const noexcept { return bases_; }
  // Local index of full-space index i.
  Index local_index(Index i) const;

 private:
  FockBasis basis_;
  std::vector<int> modes_;
  std::vector<Index> offsets_;
  std::vector<Index> bases_;
};

// Column-wise in-place application of a local operator to a full-space block.
void apply_local_columns(CMatrix& columns, const CMatrix& local, const LocalIndexer& ix);
void apply_local_columns(CVector& column, const CMatrix& local, const LocalIndexer& ix);

enum class UnitaryCheck { Strict, Unchecked };

FockVector apply_unitary(const FockVector& v, const CMatrix& u,
                         UnitaryCheck check = UnitaryCheck::Strict);
DensityOp apply_unitary(const DensityOp& rho, const CMatrix& u,
                        UnitaryCheck check = UnitaryCheck::Strict);

// Same as above, for an operator on a subset of modes; never materializes the
// full-space matrix.
FockVector apply_local_unitary(const FockVector& v, const CMatrix& local,
                               std::span<const int> modes,
                               UnitaryCheck check = UnitaryCheck::Strict);
DensityOp apply_local_unitary(const DensityOp& rho, const CMatrix& local,
                              std::span<const int> modes,
                              UnitaryCheck check = UnitaryCheck::Strict);

// max |Σ K†K − I|.
double kraus_completeness_defect(std::span<const CMatrix> kraus);

DensityOp apply_channel(const DensityOp& rho, std::span<const CMatrix> kraus);
DensityOp apply_local_channel(const DensityOp& rho, std::span<const CMatrix> kraus,
                              std::span<const int> modes);

// Reduced state on keep_modes, in the listed order.
DensityOp partial_trace(const DensityOp& rho, std::span<const int> keep_modes);

OutcomeDist measure_counts(const FockVector& v);
OutcomeDist measure_counts(const DensityOp& rho);
OutcomeDist measure_counts(const State& s);

double mean_photon_number(const State& s, int mode);

// Probability mass a coherent state puts on photon numbers >= cutoff.
double coherent_tail_mass(Complex alpha, int cutoff);
int minimal_coherent_cutoff(Complex alpha, double tail_tolerance = 1e-10);

// Single-mode truncated coherent state, renormalized. Throws CutoffError when
// the discarded tail exceeds tail_tolerance.
FockVector coherent_vector(Complex alpha, int cutoff, double tail_tolerance = 1e-10);

// Product of single-mode states; all factors must share one cutoff.
FockVector tensor_product(std::span<const FockVector> factors);

// Diagonal of Σ n_i restricted to the given modes (all modes when empty).
Eigen::VectorXd photon_number_diagonal(const FockBasis& basis, std::span<const int> modes = {});

// max |[U, N_tot]| for a full-space operator.
double number_commutator_defect(const CMatrix& u, const FockBasis& basis);

}  // namespace qoptics
