#include "qoptics/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace qoptics {

namespace {

constexpr Index kMaxDim = Index{1} << 26;

void check_modes(std::span<const int> modes, int num_modes, const char* what) {
  if (modes.empty()) throw DomainError(std::string(what) + ": empty mode list");
  std::vector<bool> seen(static_cast<std::size_t>(num_modes), false);
  for (int m : modes) {
    if (m < 0 || m >= num_modes)
      throw DomainError(std::string(what) + ": mode " + std::to_string(m) + " out of range [0, " +
                        std::to_string(num_modes) + ")");
    if (seen[static_cast<std::size_t>(m)])
      throw DomainError(std::string(what) + ": repeated mode index " + std::to_string(m));
    seen[static_cast<std::size_t>(m)] = true;
  }
}

Index ipow(Index base, int exp) {
  Index r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

double checked_probability(double p) {
  if (p < 0.0) {
    if (p > -1e-12) return 0.0;
    throw ContractError("negative probability " + std::to_string(p) + " on the diagonal");
  }
  return p;
}

void check_normalized(double total) {
  if (std::abs(total - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "state is not normalized (total probability " << total << ")";
    throw DomainError(os.str());
  }
}

}  // namespace

// ---------------------------------------------------------------- FockBasis

FockBasis::FockBasis(int num_modes, int cutoff) : num_modes_(num_modes), cutoff_(cutoff), dim_(1) {
  if (num_modes < 1) throw DomainError("FockBasis: num_modes must be positive");
  if (cutoff < 1) throw DomainError("FockBasis: cutoff must be positive");
  for (int i = 0; i < num_modes; ++i) {
    if (dim_ > kMaxDim / cutoff) throw DomainError("FockBasis: dimension cutoff^modes too large");
    dim_ *= cutoff;
  }
}

Index FockBasis::stride(int mode) const {
  if (mode < 0 || mode >= num_modes_)
    throw DomainError("mode " + std::to_string(mode) + " out of range");
  return ipow(cutoff_, num_modes_ - 1 - mode);
}

int FockBasis::occupation(Index index, int mode) const {
  return static_cast<int>((index / stride(mode)) % cutoff_);
}

Index FockBasis::index(std::span<const int> occupations) const {
  if (static_cast<int>(occupations.size()) != num_modes_)
    throw DomainError("occupation tuple has " + std::to_string(occupations.size()) +
                      " entries, basis has " + std::to_string(num_modes_) + " modes");
  Index r = 0;
  for (int m = 0; m < num_modes_; ++m) {
    const int n = occupations[static_cast<std::size_t>(m)];
    if (n < 0 || n >= cutoff_)
      throw DomainError("occupation " + std::to_string(n) + " of mode " + std::to_string(m) +
                        " outside [0, " + std::to_string(cutoff_) + ")");
    r = r * cutoff_ + n;
  }
  return r;
}

Occupation FockBasis::state(Index index) const {
  if (index < 0 || index >= dim_) throw DomainError("basis index out of range");
  Occupation occ(static_cast<std::size_t>(num_modes_));
  for (int m = num_modes_ - 1; m >= 0; --m) {
    occ[static_cast<std::size_t>(m)] = static_cast<int>(index % cutoff_);
    index /= cutoff_;
  }
  return occ;
}

Index basis_index(std::span<const int> occupations, const FockBasis& basis) {
  return basis.index(occupations);
}

Occupation basis_state(Index index, const FockBasis& basis) { return basis.state(index); }

std::string ket_label(std::span<const int> occupations) {
  const bool compact = std::all_of(occupations.begin(), occupations.end(),
                                   [](int n) { return n >= 0 && n <= 9; });
  std::string s = "|";
  for (std::size_t i = 0; i < occupations.size(); ++i) {
    if (!compact && i > 0) s += ",";
    s += std::to_string(occupations[i]);
  }
  return s + "⟩";
}

// ---------------------------------------------------------------- states

FockVector::FockVector(FockBasis basis, CVector amplitudes)
    : basis_(std::move(basis)), amps_(std::move(amplitudes)) {
  if (amps_.size() != basis_.dim())
    throw DomainError("FockVector: amplitude count does not match basis dimension");
}

FockVector FockVector::basis_vector(const FockBasis& basis, std::span<const int> occupations) {
  CVector v = CVector::Zero(basis.dim());
  v(basis.index(occupations)) = 1.0;
  return FockVector(basis, std::move(v));
}

FockVector FockVector::vacuum(const FockBasis& basis) {
  CVector v = CVector::Zero(basis.dim());
  v(0) = 1.0;
  return FockVector(basis, std::move(v));
}

Complex FockVector::amplitude(std::span<const int> occupations) const {
  return amps_(basis_.index(occupations));
}

DensityOp::DensityOp(FockBasis basis, CMatrix matrix)
    : basis_(std::move(basis)), mat_(std::move(matrix)) {
  if (mat_.rows() != basis_.dim() || mat_.cols() != basis_.dim())
    throw DomainError("DensityOp: matrix side does not match basis dimension");
}

DensityOp DensityOp::from_pure(const FockVector& v) {
  return DensityOp(v.basis(), v.amplitudes() * v.amplitudes().adjoint());
}

double DensityOp::min_eigenvalue() const {
  const CMatrix h = 0.5 * (mat_ + mat_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

const FockBasis& basis_of(const State& s) {
  return std::visit([](const auto& x) -> const FockBasis& { return x.basis(); }, s);
}

DensityOp to_density(const State& s) {
  if (const auto* v = std::get_if<FockVector>(&s)) return DensityOp::from_pure(*v);
  return std::get<DensityOp>(s);
}

// ---------------------------------------------------------------- OutcomeDist

OutcomeDist::OutcomeDist(Map entries) : entries_(std::move(entries)) {
  for (const auto& [k, p] : entries_)
    if (p < 0.0 || p > 1.0 + 1e-12) throw DomainError("OutcomeDist: probability outside [0, 1]");
}

double OutcomeDist::probability(const Occupation& outcome) const {
  auto it = entries_.find(outcome);
  return it == entries_.end() ? 0.0 : it->second;
}

double OutcomeDist::total() const {
  double s = 0.0;
  for (const auto& [k, p] : entries_) s += p;
  return s;
}

int OutcomeDist::num_modes() const {
  return entries_.empty() ? 0 : static_cast<int>(entries_.begin()->first.size());
}

std::vector<double> OutcomeDist::marginal(int mode) const {
  if (mode < 0 || mode >= num_modes()) throw DomainError("marginal: mode out of range");
  std::vector<double> out;
  for (const auto& [occ, p] : entries_) {
    const auto n = static_cast<std::size_t>(occ[static_cast<std::size_t>(mode)]);
    if (out.size() <= n) out.resize(n + 1, 0.0);
    out[n] += p;
  }
  return out;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  const std::size_t n = std::max(p.size(), q.size());
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i < p.size() ? p[i] : 0.0;
    const double b = i < q.size() ? q[i] : 0.0;
    s += std::abs(a - b);
  }
  return 0.5 * s;
}

// ---------------------------------------------------------------- local operators

LocalIndexer::LocalIndexer(const FockBasis& basis, std::span<const int> target_modes)
    : basis_(basis), modes_(target_modes.begin(), target_modes.end()) {
  check_modes(target_modes, basis.num_modes(), "LocalIndexer");
  const int k = static_cast<int>(modes_.size());
  const Index local = ipow(basis.cutoff(), k);
  offsets_.resize(static_cast<std::size_t>(local));
  for (Index l = 0; l < local; ++l) {
    Index rest = l, off = 0;
    for (int j = k - 1; j >= 0; --j) {
      off += (rest % basis.cutoff()) * basis.stride(modes_[static_cast<std::size_t>(j)]);
      rest /= basis.cutoff();
    }
    offsets_[static_cast<std::size_t>(l)] = off;
  }
  bases_.reserve(static_cast<std::size_t>(basis.dim() / local));
  for (Index i = 0; i < basis.dim(); ++i) {
    bool zero = true;
    for (int m : modes_)
      if (basis.occupation(i, m) != 0) {
        zero = false;
        break;
      }
    if (zero) bases_.push_back(i);
  }
}

Index LocalIndexer::local_index(Index i) const {
  Index l = 0;
  for (int m : modes_) l = l * basis_.cutoff() + basis_.occupation(i, m);
  return l;
}

void apply_local_columns(CMatrix& columns, const CMatrix& local, const LocalIndexer& ix) {
  const Index k = ix.local_dim();
  if (local.rows() != k || local.cols() != k)
    throw DomainError("local operator side " + std::to_string(local.rows()) +
                      " does not match d^k = " + std::to_string(k));
  const auto& off = ix.offsets();
  CMatrix block(k, columns.cols());
  for (Index base : ix.bases()) {
    for (Index l = 0; l < k; ++l) block.row(l) = columns.row(base + off[static_cast<std::size_t>(l)]);
    block = (local * block).eval();
    for (Index l = 0; l < k; ++l) columns.row(base + off[static_cast<std::size_t>(l)]) = block.row(l);
  }
}

void apply_local_columns(CVector& column, const CMatrix& local, const LocalIndexer& ix) {
  const Index k = ix.local_dim();
  if (local.rows() != k || local.cols() != k)
    throw DomainError("local operator side " + std::to_string(local.rows()) +
                      " does not match d^k = " + std::to_string(k));
  const auto& off = ix.offsets();
  CVector x(k);
  for (Index base : ix.bases()) {
    for (Index l = 0; l < k; ++l) x(l) = column(base + off[static_cast<std::size_t>(l)]);
    const CVector y = local * x;
    for (Index l = 0; l < k; ++l) column(base + off[static_cast<std::size_t>(l)]) = y(l);
  }
}

CMatrix embed_operator(const CMatrix& local, std::span<const int> target_modes,
                       const FockBasis& basis) {
  LocalIndexer ix(basis, target_modes);
  if (local.rows() != ix.local_dim() || local.cols() != ix.local_dim())
    throw DomainError("embed_operator: local side " + std::to_string(local.rows()) +
                      " does not match d^k = " + std::to_string(ix.local_dim()));
  CMatrix full = CMatrix::Zero(basis.dim(), basis.dim());
  const auto& off = ix.offsets();
  for (Index base : ix.bases())
    for (Index r = 0; r < ix.local_dim(); ++r)
      for (Index c = 0; c < ix.local_dim(); ++c)
        full(base + off[static_cast<std::size_t>(r)], base + off[static_cast<std::size_t>(c)]) =
            local(r, c);
  return full;
}

namespace {

void require_unitary(const CMatrix& u, UnitaryCheck check) {
  if (check != UnitaryCheck::Strict) return;
  const double defect = unitarity_defect(u);
  if (!(defect <= 1e-10))
    throw ContractError("operator is not unitary (|U^dag U - I|_max = " + std::to_string(defect) +
                        "); use apply_channel for non-unitary maps");
}

// (A ρ A†) computed column-wise without assuming ρ Hermitian.
CMatrix sandwich_local(const CMatrix& rho, const CMatrix& local, const LocalIndexer& ix) {
  CMatrix m = rho;
  apply_local_columns(m, local, ix);
  CMatrix t = m.adjoint();
  apply_local_columns(t, local, ix);
  return t.adjoint();
}

}  // namespace

FockVector apply_unitary(const FockVector& v, const CMatrix& u, UnitaryCheck check) {
  if (u.rows() != v.basis().dim() || u.cols() != v.basis().dim())
    throw DomainError("apply_unitary: dimension mismatch");
  require_unitary(u, check);
  return FockVector(v.basis(), u * v.amplitudes());
}

DensityOp apply_unitary(const DensityOp& rho, const CMatrix& u, UnitaryCheck check) {
  if (u.rows() != rho.basis().dim() || u.cols() != rho.basis().dim())
    throw DomainError("apply_unitary: dimension mismatch");
  require_unitary(u, check);
  return DensityOp(rho.basis(), u * rho.matrix() * u.adjoint());
}

FockVector apply_local_unitary(const FockVector& v, const CMatrix& local,
                               std::span<const int> modes, UnitaryCheck check) {
  require_unitary(local, check);
  LocalIndexer ix(v.basis(), modes);
  CVector a = v.amplitudes();
  apply_local_columns(a, local, ix);
  return FockVector(v.basis(), std::move(a));
}

DensityOp apply_local_unitary(const DensityOp& rho, const CMatrix& local,
                              std::span<const int> modes, UnitaryCheck check) {
  require_unitary(local, check);
  LocalIndexer ix(rho.basis(), modes);
  return DensityOp(rho.basis(), sandwich_local(rho.matrix(), local, ix));
}

double kraus_completeness_defect(std::span<const CMatrix> kraus) {
  if (kraus.empty()) return INFINITY;
  const Index n = kraus.front().cols();
  CMatrix sum = CMatrix::Zero(n, n);
  for (const auto& k : kraus) {
    if (k.cols() != n || k.rows() != n) return INFINITY;
    sum += k.adjoint() * k;
  }
  return (sum - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

namespace {

void require_complete(std::span<const CMatrix> kraus) {
  const double defect = kraus_completeness_defect(kraus);
  if (!(defect <= 1e-10))
    throw ContractError("Kraus set is not trace preserving (|sum K^dag K - I|_max = " +
                        std::to_string(defect) + ")");
}

}  // namespace

DensityOp apply_channel(const DensityOp& rho, std::span<const CMatrix> kraus) {
  require_complete(kraus);
  if (kraus.front().rows() != rho.basis().dim())
    throw DomainError("apply_channel: dimension mismatch");
  CMatrix out = CMatrix::Zero(rho.basis().dim(), rho.basis().dim());
  for (const auto& k : kraus) out += k * rho.matrix() * k.adjoint();
  return DensityOp(rho.basis(), std::move(out));
}

DensityOp apply_local_channel(const DensityOp& rho, std::span<const CMatrix> kraus,
                              std::span<const int> modes) {
  require_complete(kraus);
  LocalIndexer ix(rho.basis(), modes);
  CMatrix out = CMatrix::Zero(rho.basis().dim(), rho.basis().dim());
  for (const auto& k : kraus) out += sandwich_local(rho.matrix(), k, ix);
  return DensityOp(rho.basis(), std::move(out));
}

DensityOp partial_trace(const DensityOp& rho, std::span<const int> keep_modes) {
  const FockBasis& basis = rho.basis();
  check_modes(keep_modes, basis.num_modes(), "partial_trace");
  LocalIndexer keep(basis, keep_modes);
  std::vector<int> traced;
  for (int m = 0; m < basis.num_modes(); ++m)
    if (std::find(keep_modes.begin(), keep_modes.end(), m) == keep_modes.end()) traced.push_back(m);

  const FockBasis reduced(static_cast<int>(keep_modes.size()), basis.cutoff());
  if (traced.empty()) {
    // Pure reordering of the kept modes.
    CMatrix out(reduced.dim(), reduced.dim());
    const auto& ko = keep.offsets();
    for (Index r = 0; r < reduced.dim(); ++r)
      for (Index c = 0; c < reduced.dim(); ++c)
        out(r, c) = rho.matrix()(ko[static_cast<std::size_t>(r)], ko[static_cast<std::size_t>(c)]);
    return DensityOp(reduced, std::move(out));
  }
  LocalIndexer tr(basis, traced);
  const auto& ko = keep.offsets();
  const auto& to = tr.offsets();
  CMatrix out = CMatrix::Zero(reduced.dim(), reduced.dim());
  for (Index r = 0; r < reduced.dim(); ++r)
    for (Index c = 0; c < reduced.dim(); ++c) {
      Complex s = 0.0;
      for (Index t : to) s += rho.matrix()(ko[static_cast<std::size_t>(r)] + t, ko[static_cast<std::size_t>(c)] + t);
      out(r, c) = s;
    }
  return DensityOp(reduced, std::move(out));
}

OutcomeDist measure_counts(const FockVector& v) {
  OutcomeDist::Map m;
  double total = 0.0;
  for (Index i = 0; i < v.basis().dim(); ++i) {
    const double p = std::norm(v.amplitudes()(i));
    total += p;
    if (p > 0.0) m.emplace(v.basis().state(i), p);
  }
  check_normalized(total);
  return OutcomeDist(std::move(m));
}

OutcomeDist measure_counts(const DensityOp& rho) {
  OutcomeDist::Map m;
  double total = 0.0;
  for (Index i = 0; i < rho.basis().dim(); ++i) {
    const double p = checked_probability(rho.matrix()(i, i).real());
    total += p;
    if (p > 0.0) m.emplace(rho.basis().state(i), p);
  }
  check_normalized(total);
  return OutcomeDist(std::move(m));
}

OutcomeDist measure_counts(const State& s) {
  return std::visit([](const auto& x) { return measure_counts(x); }, s);
}

double mean_photon_number(const State& s, int mode) {
  const FockBasis& basis = basis_of(s);
  const Index stride = basis.stride(mode);
  double mean = 0.0;
  if (const auto* v = std::get_if<FockVector>(&s)) {
    for (Index i = 0; i < basis.dim(); ++i)
      mean += std::norm(v->amplitudes()(i)) * static_cast<double>((i / stride) % basis.cutoff());
  } else {
    const auto& rho = std::get<DensityOp>(s).matrix();
    for (Index i = 0; i < basis.dim(); ++i)
      mean += rho(i, i).real() * static_cast<double>((i / stride) % basis.cutoff());
  }
  return mean;
}

double coherent_tail_mass(Complex alpha, int cutoff) {
  if (cutoff < 1) return 1.0;
  const double x = std::norm(alpha);
  if (x == 0.0) return 0.0;
  const double lx = std::log(x);
  double sum = 0.0;
  for (int n = cutoff;; ++n) {
    const double term = std::exp(-x + n * lx - std::lgamma(n + 1.0));
    sum += term;
    if (n > x && (term < 1e-300 || term < sum * 1e-17)) break;
    if (n > cutoff + 100000) break;
  }
  return std::min(sum, 1.0);
}

int minimal_coherent_cutoff(Complex alpha, double tail_tolerance) {
  int d = 1;
  while (coherent_tail_mass(alpha, d) > tail_tolerance) ++d;
  return d;
}

FockVector coherent_vector(Complex alpha, int cutoff, double tail_tolerance) {
  if (cutoff < 1) throw DomainError("coherent_vector: cutoff must be positive");
  const double tail = coherent_tail_mass(alpha, cutoff);
  if (tail > tail_tolerance) {
    const int need = minimal_coherent_cutoff(alpha, tail_tolerance);
    std::ostringstream os;
    os << "cutoff " << cutoff << " too small for |alpha| = " << std::abs(alpha)
       << ": truncated tail mass " << tail << " exceeds " << tail_tolerance
       << "; need cutoff >= " << need;
    throw CutoffError(os.str(), need);
  }
  const FockBasis basis(1, cutoff);
  CVector a(cutoff);
  const double r = std::abs(alpha);
  const double theta = std::arg(alpha);
  const double x = r * r;
  for (int n = 0; n < cutoff; ++n) {
    if (r == 0.0) {
      a(n) = n == 0 ? 1.0 : 0.0;
      continue;
    }
    const double mag = std::exp(-0.5 * x + n * std::log(r) - 0.5 * std::lgamma(n + 1.0));
    a(n) = std::polar(mag, n * theta);
  }
  a /= a.norm();
  return FockVector(basis, std::move(a));
}

FockVector tensor_product(std::span<const FockVector> factors) {
  if (factors.empty()) throw DomainError("tensor_product: no factors");
  const int d = factors.front().basis().cutoff();
  CVector acc = CVector::Ones(1);
  int modes = 0;
  for (const auto& f : factors) {
    if (f.basis().cutoff() != d) throw DomainError("tensor_product: cutoffs differ");
    const CVector& b = f.amplitudes();
    CVector next(acc.size() * b.size());
    for (Index i = 0; i < acc.size(); ++i) next.segment(i * b.size(), b.size()) = acc(i) * b;
    acc = std::move(next);
    modes += f.basis().num_modes();
  }
  return FockVector(FockBasis(modes, d), std::move(acc));
}

Eigen::VectorXd photon_number_diagonal(const FockBasis& basis, std::span<const int> modes) {
  std::vector<int> all;
  if (modes.empty()) {
    all.resize(static_cast<std::size_t>(basis.num_modes()));
    std::iota(all.begin(), all.end(), 0);
    modes = all;
  }
  Eigen::VectorXd n = Eigen::VectorXd::Zero(basis.dim());
  for (Index i = 0; i < basis.dim(); ++i)
    for (int m : modes) n(i) += basis.occupation(i, m);
  return n;
}

double number_commutator_defect(const CMatrix& u, const FockBasis& basis) {
  if (u.rows() != basis.dim() || u.cols() != basis.dim()) return INFINITY;
  const Eigen::VectorXd n = photon_number_diagonal(basis);
  double worst = 0.0;
  for (Index c = 0; c < u.cols(); ++c)
    for (Index r = 0; r < u.rows(); ++r)
      worst = std::max(worst, std::abs(u(r, c)) * std::abs(n(c) - n(r)));
  return worst;
}

}  // namespace qoptics
