#include "rescomp/free_sets/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rescomp/core/entropy.hpp"
#include "rescomp/core/error.hpp"
#include "rescomp/core/linalg.hpp"
#include "rescomp/core/ops.hpp"
#include "rescomp/core/random.hpp"
#include "rescomp/core/serialize.hpp"
#include "rescomp/solvers/conic.hpp"
#include "rescomp/solvers/lp.hpp"
#include "rescomp/solvers/nnls.hpp"

namespace rescomp {

namespace {

constexpr std::size_t kMaxGenerators = 4096;
// Real coordinate count up to which polytope membership uses the simplex LP.
constexpr Index kMaxLpCoordinates = 1024;

Matrix diagonal_of(const Matrix& x) {
  Matrix d = Matrix::Zero(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) d(i, i) = x(i, i).real();
  return d;
}

double max_offdiagonal(const Matrix& x) {
  double m = 0.0;
  for (Index j = 0; j < x.cols(); ++j)
    for (Index i = 0; i < x.rows(); ++i)
      if (i != j) m = std::max(m, std::abs(x(i, j)));
  return m;
}

// Raw real coordinates: Re of the diagonal, Re and Im of the strict upper
// triangle. Max-abs distance in these equals entrywise max-abs distance.
RealVector entry_coords(const Matrix& h) {
  const Index d = h.rows();
  RealVector v(d * d);
  Index k = 0;
  for (Index i = 0; i < d; ++i) v(k++) = h(i, i).real();
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < j; ++i) {
      v(k++) = h(i, j).real();
      v(k++) = h(i, j).imag();
    }
  return v;
}

DensityMatrix gibbs_state(const HermitianOperator& h, double beta) {
  linalg::Eigh e = linalg::eigh(h.matrix());
  const double emin = e.values.minCoeff();
  Matrix g = linalg::apply_function(e, [&](double x) { return std::exp(-beta * (x - emin)); });
  g /= linalg::real_trace(g);
  return DensityMatrix::trusted(h.shape(), g);
}

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

Matrix pt_cone_project(const Matrix& x, const SubsystemShape& shape, const std::vector<int>& party) {
  return partial_transpose(linalg::psd_part(partial_transpose(x, shape, party)), shape, party);
}

}  // namespace

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Incoherent: return "incoherent";
    case FamilyKind::Ppt: return "ppt";
    case FamilyKind::GibbsSingleton: return "gibbs";
    case FamilyKind::MaxMixedSingleton: return "maxmixed";
    case FamilyKind::Polytope: return "polytope";
  }
  return "unknown";
}

double witness_distance_bound(const Matrix& w, const Matrix& rho, double support_value) {
  const RealVector ev = linalg::eigenvalues(w);
  const double spread = ev.maxCoeff() - ev.minCoeff();
  if (spread <= 0.0) return 0.0;
  return std::max(0.0, (linalg::trace_inner(w, rho) - support_value) / spread);
}

FreeSetFamily::FreeSetFamily(FamilyKind kind, SubsystemShape shape)
    : kind_(kind), shape_(std::move(shape)), reference_(DensityMatrix::maximally_mixed(shape_)) {}

void FreeSetFamily::finish() {
  if (kind_ == FamilyKind::Polytope) {
    Matrix bary = Matrix::Zero(shape_.total(), shape_.total());
    for (const DensityMatrix& g : generators_) bary += g.matrix();
    reference_ = DensityMatrix::trusted(shape_, bary / static_cast<double>(generators_.size()));
  }
}

FreeSetFamily FreeSetFamily::incoherent(const SubsystemShape& shape) {
  return FreeSetFamily(FamilyKind::Incoherent, shape);
}

FreeSetFamily FreeSetFamily::ppt(const SubsystemShape& shape, std::vector<int> party_a) {
  party_a = sorted_unique(std::move(party_a));
  for (int f : party_a)
    if (f < 0 || f >= shape.factors())
      throw Error(ErrorCode::InvalidArgument, "ppt: party index " + std::to_string(f) + " out of range");
  FreeSetFamily fam(FamilyKind::Ppt, shape);
  fam.party_a_ = std::move(party_a);
  return fam;
}

FreeSetFamily FreeSetFamily::gibbs(const HermitianOperator& hamiltonian, double inverse_temperature) {
  if (!std::isfinite(inverse_temperature))
    throw Error(ErrorCode::InvalidArgument, "gibbs: inverse temperature must be finite");
  FreeSetFamily fam(FamilyKind::GibbsSingleton, hamiltonian.shape());
  fam.reference_ = gibbs_state(hamiltonian, inverse_temperature);
  fam.hamiltonian_ = hamiltonian;
  fam.beta_ = inverse_temperature;
  return fam;
}

FreeSetFamily FreeSetFamily::max_mixed(const SubsystemShape& shape) {
  return FreeSetFamily(FamilyKind::MaxMixedSingleton, shape);
}

FreeSetFamily FreeSetFamily::singleton(const DensityMatrix& state) {
  FreeSetFamily fam(FamilyKind::GibbsSingleton, state.shape());
  fam.reference_ = state;
  return fam;
}

FreeSetFamily FreeSetFamily::polytope(std::vector<DensityMatrix> generators, PolytopeCopyRule rule) {
  if (generators.empty()) throw Error(ErrorCode::InvalidArgument, "polytope: no generators");
  for (const DensityMatrix& g : generators) require_same_shape(g.shape(), generators.front().shape(), "polytope");
  FreeSetFamily fam(FamilyKind::Polytope, generators.front().shape());
  fam.base_generators_ = generators;
  fam.generators_ = std::move(generators);
  fam.rule_ = rule;
  fam.finish();
  return fam;
}

FreeSetFamily FreeSetFamily::adversarial_polytope() {
  const SubsystemShape q{2};
  return polytope({DensityMatrix::basis(q, 0), DensityMatrix::maximally_coherent(2)}, PolytopeCopyRule::Naive);
}

std::string FreeSetFamily::name() const {
  std::string dims;
  for (int i = 0; i < shape_.factors(); ++i) dims += (i ? "," : "") + std::to_string(shape_.dim(i));
  switch (kind_) {
    case FamilyKind::Incoherent: return "incoherent:" + dims;
    case FamilyKind::Ppt: {
      std::string p;
      for (std::size_t i = 0; i < party_a_.size(); ++i) p += (i ? "," : "") + std::to_string(party_a_[i]);
      return "ppt:" + dims + ":" + p;
    }
    case FamilyKind::MaxMixedSingleton: return "maxmixed:" + dims;
    case FamilyKind::GibbsSingleton: return hamiltonian_ ? "gibbs:" + dims : "singleton:" + dims;
    case FamilyKind::Polytope:
      return "polytope:" + dims + ":" + std::to_string(generators_.size()) +
             (rule_ == PolytopeCopyRule::Naive ? ":naive" : "");
  }
  return "unknown";
}

// ---------------------------------------------------------------- projections

std::vector<MatrixProjection> FreeSetFamily::set_projections() const {
  switch (kind_) {
    case FamilyKind::Incoherent:
      return {[](Matrix& x) {
        RealVector d = x.diagonal().real();
        d = linalg::project_simplex(d, 1.0);
        x = d.cast<Complex>().asDiagonal();
      }};
    case FamilyKind::Ppt: {
      const SubsystemShape shape = shape_;
      const std::vector<int> party = party_a_;
      return {[](Matrix& x) { x = linalg::project_spectraplex(x, 1.0); },
              [shape, party](Matrix& x) { x = pt_cone_project(x, shape, party); }};
    }
    case FamilyKind::GibbsSingleton:
    case FamilyKind::MaxMixedSingleton: {
      const Matrix s = reference_.matrix();
      return {[s](Matrix& x) { x = s; }};
    }
    case FamilyKind::Polytope: {
      RealMatrix g(shape_.total() * shape_.total(), static_cast<Index>(generators_.size()));
      for (std::size_t k = 0; k < generators_.size(); ++k)
        g.col(static_cast<Index>(k)) = linalg::hvec(generators_[k].matrix());
      std::vector<Matrix> gens;
      for (const DensityMatrix& d : generators_) gens.push_back(d.matrix());
      return {[g, gens](Matrix& x) {
        const RealVector w = simplex_least_squares(g, linalg::hvec(linalg::hermitize(x)));
        x.setZero();
        for (std::size_t k = 0; k < gens.size(); ++k) x += w(static_cast<Index>(k)) * gens[k];
      }};
    }
  }
  return {};
}

std::vector<MatrixProjection> FreeSetFamily::cone_projections() const {
  switch (kind_) {
    case FamilyKind::Incoherent:
      return {[](Matrix& x) {
        RealVector d = x.diagonal().real().cwiseMax(0.0);
        x = d.cast<Complex>().asDiagonal();
      }};
    case FamilyKind::Ppt: {
      const SubsystemShape shape = shape_;
      const std::vector<int> party = party_a_;
      return {[](Matrix& x) { x = linalg::psd_part(x); },
              [shape, party](Matrix& x) { x = pt_cone_project(x, shape, party); }};
    }
    case FamilyKind::GibbsSingleton:
    case FamilyKind::MaxMixedSingleton: {
      const Matrix s = reference_.matrix();
      const double n2 = s.squaredNorm();
      return {[s, n2](Matrix& x) { x = std::max(0.0, linalg::trace_inner(x, s) / n2) * s; }};
    }
    case FamilyKind::Polytope: {
      RealMatrix g(shape_.total() * shape_.total(), static_cast<Index>(generators_.size()));
      for (std::size_t k = 0; k < generators_.size(); ++k)
        g.col(static_cast<Index>(k)) = linalg::hvec(generators_[k].matrix());
      std::vector<Matrix> gens;
      for (const DensityMatrix& d : generators_) gens.push_back(d.matrix());
      return {[g, gens](Matrix& x) {
        const RealVector w = nnls(g, linalg::hvec(linalg::hermitize(x)));
        x.setZero();
        for (std::size_t k = 0; k < gens.size(); ++k) x += w(static_cast<Index>(k)) * gens[k];
      }};
    }
  }
  return {};
}

Matrix FreeSetFamily::project(const Matrix& x, int max_iterations) const {
  std::vector<MatrixProjection> sets = set_projections();
  if (sets.size() == 1) {
    Matrix y = linalg::hermitize(x);
    sets.front()(y);
    return y;
  }
  std::vector<conic::Projection> block_sets;
  for (const MatrixProjection& p : sets) block_sets.push_back([p](conic::Blocks& b) { p(b[0]); });
  conic::FeasibilityResult r = conic::dykstra(block_sets, {linalg::hermitize(x)}, max_iterations, 1e-13);
  return r.point[0];
}

DensityMatrix FreeSetFamily::repair(const Matrix& x) const {
  const Index d = shape_.total();
  switch (kind_) {
    case FamilyKind::Incoherent: {
      RealVector p = x.diagonal().real().cwiseMax(0.0);
      const double s = p.sum();
      if (!(s > 0.0)) return reference_;
      return DensityMatrix::trusted(shape_, (p / s).cast<Complex>().asDiagonal());
    }
    case FamilyKind::GibbsSingleton:
    case FamilyKind::MaxMixedSingleton:
      return reference_;
    case FamilyKind::Polytope: {
      Matrix y = linalg::hermitize(x);
      set_projections().front()(y);
      return DensityMatrix::trusted(shape_, y);
    }
    case FamilyKind::Ppt: {
      Matrix s = linalg::project_spectraplex(x, 1.0);
      const double lam = linalg::min_eigenvalue(partial_transpose(s, shape_, party_a_));
      if (lam < 0.0) {
        // Smallest t with (1-t)λ + t/d ≥ 0, nudged inward against rounding.
        const double t = std::min(1.0, (-lam + 1e-15) / (1.0 / static_cast<double>(d) - lam));
        s = (1.0 - t) * s + t * reference_.matrix();
      }
      return DensityMatrix::trusted(shape_, s);
    }
  }
  return reference_;
}

// ----------------------------------------------------------------- membership

MembershipCertificate FreeSetFamily::contains(const DensityMatrix& rho, double tol) const {
  require_same_shape(rho.shape(), shape_, "contains");
  MembershipCertificate out;
  const Matrix& r = rho.matrix();
  switch (kind_) {
    case FamilyKind::Incoherent: {
      out.is_member = max_offdiagonal(r) <= tol;
      if (!out.is_member) {
        Matrix w = r - diagonal_of(r);
        out.distance_bound = witness_distance_bound(w, r, 0.0);
        out.witness = HermitianOperator(shape_, linalg::hermitize(w));
      }
      break;
    }
    case FamilyKind::Ppt: {
      linalg::Eigh e = linalg::eigh(partial_transpose(r, shape_, party_a_));
      out.is_member = e.values(0) >= -tol;
      if (!out.is_member) {
        const Vector v = e.vectors.col(0);
        Matrix w = -partial_transpose(Matrix(v * v.adjoint()), shape_, party_a_);
        out.distance_bound = witness_distance_bound(w, r, 0.0);
        out.witness = HermitianOperator(shape_, linalg::hermitize(w));
      }
      break;
    }
    case FamilyKind::GibbsSingleton:
    case FamilyKind::MaxMixedSingleton: {
      const double t = trace_distance(rho, reference_);
      out.is_member = t <= tol;
      if (!out.is_member) {
        out.distance_bound = t;
        out.witness = HermitianOperator(shape_, linalg::hermitize(r - reference_.matrix()));
      }
      break;
    }
    case FamilyKind::Polytope: {
      const Index k = static_cast<Index>(generators_.size());
      const RealVector target = entry_coords(r);
      const Index e = target.size();
      double residual;
      if (e <= kMaxLpCoordinates) {
        // min t  s.t.  |Σ w_j g_j - ρ|_e ≤ t,  Σ w = 1,  w ≥ 0.
        const Index nv = k + 1 + 2 * e;
        RealMatrix a = RealMatrix::Zero(2 * e + 1, nv);
        RealVector b = RealVector::Zero(2 * e + 1);
        RealVector c = RealVector::Zero(nv);
        for (Index j = 0; j < k; ++j) {
          const RealVector gj = entry_coords(generators_[static_cast<std::size_t>(j)].matrix());
          a.block(0, j, e, 1) = gj;
          a.block(e, j, e, 1) = -gj;
          a(2 * e, j) = 1.0;
        }
        for (Index i = 0; i < 2 * e; ++i) {
          a(i, k) = -1.0;
          a(i, k + 1 + i) = 1.0;
        }
        b.head(e) = target;
        b.segment(e, e) = -target;
        b(2 * e) = 1.0;
        c(k) = 1.0;
        const lp::Result res = lp::solve_standard(a, b, c);
        if (res.status != lp::Status::Optimal)
          throw Error(ErrorCode::SolverFailure, "polytope membership LP failed");
        residual = res.objective;
      } else {
        Matrix p = r;
        set_projections().front()(p);
        residual = (entry_coords(p) - target).cwiseAbs().maxCoeff();
      }
      out.is_member = residual <= tol;
      if (!out.is_member) {
        Matrix p = r;
        set_projections().front()(p);
        Matrix w = linalg::hermitize(r - p);
        double h = -std::numeric_limits<double>::infinity();
        for (const DensityMatrix& g : generators_) h = std::max(h, linalg::trace_inner(w, g.matrix()));
        out.distance_bound = witness_distance_bound(w, r, h);
        out.witness = HermitianOperator(shape_, w);
      }
      break;
    }
  }
  return out;
}

bool FreeSetFamily::is_member(const Matrix& rho, double tol) const {
  return contains(DensityMatrix::trusted(shape_, rho), tol).is_member;
}

// ------------------------------------------------------------ linear oracles

LinearMinimization FreeSetFamily::linear_minimization(const HermitianOperator& g, const SolverConfig& cfg) const {
  require_same_shape(g.shape(), shape_, "linear_minimization");
  return linear_minimization(g.matrix(), cfg);
}

LinearMinimization FreeSetFamily::linear_minimization(const Matrix& g_in, const SolverConfig& cfg) const {
  const Index d = shape_.total();
  if (g_in.rows() != d || g_in.cols() != d) throw Error(ErrorCode::ShapeMismatch, "linear_minimization: size");
  const Matrix g = linalg::hermitize(g_in);
  switch (kind_) {
    case FamilyKind::Incoherent: {
      Index best = 0;
      for (Index i = 1; i < d; ++i)
        if (g(i, i).real() < g(best, best).real()) best = i;
      const double v = g(best, best).real();
      return {DensityMatrix::basis(shape_, best), v, v};
    }
    case FamilyKind::GibbsSingleton:
    case FamilyKind::MaxMixedSingleton: {
      const double v = linalg::trace_inner(g, reference_.matrix());
      return {reference_, v, v};
    }
    case FamilyKind::Polytope: {
      std::size_t best = 0;
      double v = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < generators_.size(); ++k) {
        const double t = linalg::trace_inner(g, generators_[k].matrix());
        if (t < v) {
          v = t;
          best = k;
        }
      }
      return {generators_[best], v, v};
    }
    case FamilyKind::Ppt: {
      const SubsystemShape shape = shape_;
      const std::vector<int> party = party_a_;
      conic::Problem prob;
      prob.objective = {g};
      prob.sets = {[](conic::Blocks& b) { b[0] = linalg::project_spectraplex(b[0], 1.0); },
                   [shape, party](conic::Blocks& b) { b[0] = pt_cone_project(b[0], shape, party); }};
      conic::Options opt;
      opt.max_iterations = cfg.admm_max_iterations;
      opt.tolerance = 1e-11;
      opt.penalty = std::max(1e-3, linalg::operator_norm(g));
      const conic::State st = conic::solve(prob, {reference_.matrix()}, opt);
      DensityMatrix sigma = repair(st.z[0]);
      const double value = linalg::trace_inner(g, sigma.matrix());
      // tr(Gσ) ≥ λ_min(G - Q^Γ) for every Q ⪰ 0 on PPT σ; Q from the multiplier.
      const Matrix y = st.penalty * st.duals[1][0];
      double lower = linalg::min_eigenvalue(g);
      for (double sign : {1.0, -1.0}) {
        const Matrix q = linalg::psd_part(partial_transpose(Matrix(sign * y), shape_, party_a_));
        lower = std::max(lower, linalg::min_eigenvalue(g - partial_transpose(q, shape_, party_a_)));
      }
      if (!st.converged && value - lower > 1e-6)
        throw Error(ErrorCode::SolverFailure, "ppt linear minimization did not converge");
      return {sigma, value, std::min(lower, value)};
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown family kind");
}

double FreeSetFamily::support_function(const Matrix& w, const SolverConfig& cfg) const {
  return -linear_minimization(Matrix(-w), cfg).lower_bound;
}

// ------------------------------------------------------------ extreme points

std::vector<DensityMatrix> FreeSetFamily::extreme_points(int max_count, std::uint64_t seed) const {
  std::vector<DensityMatrix> out;
  switch (kind_) {
    case FamilyKind::Incoherent:
      for (Index i = 0; i < shape_.total(); ++i) out.push_back(DensityMatrix::basis(shape_, i));
      return out;
    case FamilyKind::GibbsSingleton:
    case FamilyKind::MaxMixedSingleton:
      return {reference_};
    case FamilyKind::Polytope:
      return generators_;
    case FamilyKind::Ppt: {
      Rng rng(seed);
      const Index d = shape_.total();
      for (int c = 0; c < max_count; ++c) {
        if (c % 2 == 0) {
          // Pure product state across all factors.
          Vector psi = Vector::Ones(1);
          for (int f = 0; f < shape_.factors(); ++f) {
            const Vector v = haar_random_vector(shape_.dim(f), rng);
            Vector next(psi.size() * v.size());
            for (Index i = 0; i < psi.size(); ++i) next.segment(i * v.size(), v.size()) = psi(i) * v;
            psi = next;
          }
          out.push_back(DensityMatrix::pure(shape_, psi));
        } else {
          // Boundary point on the segment from I/d toward a random pure state.
          const Vector psi = haar_random_vector(d, rng);
          const Matrix p = psi * psi.adjoint();
          const double lam = linalg::min_eigenvalue(partial_transpose(p, shape_, party_a_));
          const double inv_d = 1.0 / static_cast<double>(d);
          const double t = lam >= 0.0 ? 1.0 : inv_d / (inv_d - lam);
          out.push_back(repair(t * p + (1.0 - t) * reference_.matrix()));
        }
      }
      return out;
    }
  }
  return out;
}

// ----------------------------------------------------------- derived families

FreeSetFamily FreeSetFamily::n_copy(int n) const {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n_copy: n must be at least 1");
  if (n == 1) return *this;
  const SubsystemShape shape = shape_.n_copy(n);
  switch (kind_) {
    case FamilyKind::Incoherent: return incoherent(shape);
    case FamilyKind::MaxMixedSingleton: return max_mixed(shape);
    case FamilyKind::Ppt: {
      std::vector<int> party;
      for (int c = 0; c < n; ++c)
        for (int f : party_a_) party.push_back(f + c * shape_.factors());
      return ppt(shape, party);
    }
    case FamilyKind::GibbsSingleton: {
      FreeSetFamily fam = *this;
      fam.shape_ = shape;
      fam.reference_ = tensor_power(reference_, n);
      fam.copies_ = copies_ * n;
      return fam;
    }
    case FamilyKind::Polytope: {
      const int copies = copies_ * n;
      std::vector<DensityMatrix> gens;
      if (rule_ == PolytopeCopyRule::Naive) {
        for (const DensityMatrix& g : base_generators_) gens.push_back(tensor_power(g, copies));
      } else {
        const double count = std::pow(static_cast<double>(base_generators_.size()), copies);
        if (count > static_cast<double>(kMaxGenerators))
          throw Error(ErrorCode::DimensionCap, "polytope n_copy would need more than 4096 generators");
        gens = base_generators_;
        for (int c = 1; c < copies; ++c) {
          std::vector<DensityMatrix> next;
          for (const DensityMatrix& a : gens)
            for (const DensityMatrix& b : base_generators_) next.push_back(tensor_product(a, b));
          gens = std::move(next);
        }
      }
      FreeSetFamily fam(FamilyKind::Polytope, shape);
      fam.generators_ = std::move(gens);
      fam.base_generators_ = base_generators_;
      fam.rule_ = rule_;
      fam.copies_ = copies;
      fam.finish();
      return fam;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown family kind");
}

FreeSetFamily FreeSetFamily::reduced(std::span<const int> keep_in) const {
  check_keep_set(keep_in, shape_.factors());
  std::vector<int> keep = sorted_unique(std::vector<int>(keep_in.begin(), keep_in.end()));
  const SubsystemShape shape = shape_.select(keep);
  switch (kind_) {
    case FamilyKind::Incoherent: return incoherent(shape);
    case FamilyKind::MaxMixedSingleton: return max_mixed(shape);
    case FamilyKind::Ppt: {
      std::vector<int> party;
      for (std::size_t k = 0; k < keep.size(); ++k)
        if (std::binary_search(party_a_.begin(), party_a_.end(), keep[k])) party.push_back(static_cast<int>(k));
      return ppt(shape, party);
    }
    case FamilyKind::GibbsSingleton: return singleton(partial_trace(reference_, keep));
    case FamilyKind::Polytope: {
      std::vector<DensityMatrix> gens;
      for (const DensityMatrix& g : generators_) gens.push_back(partial_trace(g, keep));
      return polytope(std::move(gens), rule_);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown family kind");
}

FreeSetFamily FreeSetFamily::permuted(std::span<const int> perm) const {
  check_permutation(perm, shape_.factors());
  const SubsystemShape shape = shape_.select(perm);
  switch (kind_) {
    case FamilyKind::Incoherent: return incoherent(shape);
    case FamilyKind::MaxMixedSingleton: return max_mixed(shape);
    case FamilyKind::Ppt: {
      std::vector<int> party;
      for (std::size_t k = 0; k < perm.size(); ++k)
        if (std::binary_search(party_a_.begin(), party_a_.end(), perm[k])) party.push_back(static_cast<int>(k));
      return ppt(shape, party);
    }
    case FamilyKind::GibbsSingleton: return singleton(permute_subsystems(reference_, perm));
    case FamilyKind::Polytope: {
      std::vector<DensityMatrix> gens;
      for (const DensityMatrix& g : generators_) gens.push_back(permute_subsystems(g, perm));
      return polytope(std::move(gens), rule_);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown family kind");
}

FreeSetFamily FreeSetFamily::with_shape(const SubsystemShape& shape) const {
  if (shape == shape_) return *this;
  switch (kind_) {
    case FamilyKind::Incoherent: return incoherent(shape);
    case FamilyKind::MaxMixedSingleton: return max_mixed(shape);
    case FamilyKind::Ppt:
      if (shape.factors() < 2) throw Error(ErrorCode::InvalidArgument, "ppt family needs at least two factors");
      return ppt(shape, {0});
    default:
      throw Error(ErrorCode::InvalidArgument, "family " + name() + " has no canonical form on shape " +
                                                  shape.to_string());
  }
}

// ------------------------------------------------------------- serialization

nlohmann::json FreeSetFamily::to_json() const {
  nlohmann::json j;
  j["shape"] = shape_.dims();
  switch (kind_) {
    case FamilyKind::Incoherent: j["kind"] = "incoherent"; break;
    case FamilyKind::MaxMixedSingleton: j["kind"] = "maxmixed"; break;
    case FamilyKind::Ppt:
      j["kind"] = "ppt";
      j["party_a"] = party_a_;
      break;
    case FamilyKind::GibbsSingleton:
      if (hamiltonian_) {
        j["kind"] = "gibbs";
        j["shape"] = hamiltonian_->shape().dims();
        j["hamiltonian"] = io::matrix_to_json(hamiltonian_->matrix());
        j["beta"] = beta_;
        j["copies"] = copies_;
      } else {
        j["kind"] = "singleton";
        j["state"] = io::to_json(reference_);
      }
      break;
    case FamilyKind::Polytope: {
      j["kind"] = "polytope";
      j["shape"] = base_generators_.front().shape().dims();
      j["generators"] = nlohmann::json::array();
      for (const DensityMatrix& g : base_generators_) j["generators"].push_back(io::to_json(g));
      j["copy_rule"] = rule_ == PolytopeCopyRule::Naive ? "naive" : "tensor_hull";
      j["copies"] = copies_;
      break;
    }
  }
  return j;
}

FreeSetFamily FreeSetFamily::from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const int copies = j.value("copies", 1);
    if (kind == "incoherent") return incoherent(io::shape_from_json(j.at("shape")));
    if (kind == "maxmixed") return max_mixed(io::shape_from_json(j.at("shape")));
    if (kind == "ppt")
      return ppt(io::shape_from_json(j.at("shape")), j.value("party_a", std::vector<int>{0}));
    if (kind == "singleton") return singleton(io::density_from_json(j.at("state")));
    if (kind == "gibbs") {
      const SubsystemShape shape = io::shape_from_json(j.at("shape"));
      HermitianOperator h(shape, io::matrix_from_json(j.at("hamiltonian")));
      return gibbs(h, j.at("beta").get<double>()).n_copy(copies);
    }
    if (kind == "polytope") {
      std::vector<DensityMatrix> gens;
      for (const auto& g : j.at("generators")) gens.push_back(io::density_from_json(g));
      const std::string rule = j.value("copy_rule", std::string("tensor_hull"));
      if (rule != "naive" && rule != "tensor_hull")
        throw Error(ErrorCode::ConfigError, "unknown polytope copy_rule '" + rule + "'");
      return polytope(std::move(gens), rule == "naive" ? PolytopeCopyRule::Naive : PolytopeCopyRule::TensorHull)
          .n_copy(copies);
    }
    throw Error(ErrorCode::ConfigError, "unknown family kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed family descriptor: ") + e.what());
  }
}

}  // namespace rescomp
