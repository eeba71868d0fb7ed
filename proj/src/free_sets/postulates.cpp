#include "rescomp/free_sets/postulates.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "rescomp/core/error.hpp"
#include "rescomp/core/ops.hpp"
#include "rescomp/core/random.hpp"
#include "rescomp/core/serialize.hpp"

namespace rescomp {

namespace {

DensityMatrix random_member(const std::vector<DensityMatrix>& points, Rng& rng) {
  std::gamma_distribution<double> gamma(1.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
  // Sparse Dirichlet mixtures over a few points reach the faces as well.
  const std::size_t terms = std::min<std::size_t>(points.size(), 1 + pick(rng) % 4);
  Matrix m = Matrix::Zero(points.front().dim(), points.front().dim());
  double total = 0.0;
  for (std::size_t t = 0; t < terms; ++t) {
    const double w = gamma(rng);
    m += w * points[pick(rng)].matrix();
    total += w;
  }
  return DensityMatrix::trusted(points.front().shape(), m / total);
}

std::vector<std::vector<int>> permutations_of(int count) {
  std::vector<std::vector<int>> out;
  std::vector<int> p(static_cast<std::size_t>(count));
  std::iota(p.begin(), p.end(), 0);
  if (count <= 4) {
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
  }
  for (int i = 0; i + 1 < count; ++i) {
    std::vector<int> q = p;
    std::swap(q[static_cast<std::size_t>(i)], q[static_cast<std::size_t>(i + 1)]);
    out.push_back(q);
  }
  std::vector<int> rev(p.rbegin(), p.rend());
  out.push_back(rev);
  return out;
}

class Checker {
 public:
  Checker(int postulate, std::string name) {
    c_.postulate = postulate;
    c_.name = std::move(name);
  }
  void check(const FreeSetFamily& target, const DensityMatrix& state, double tol, const std::string& what) {
    ++c_.checks;
    if (c_.status == PostulateStatus::Fail) return;
    const MembershipCertificate cert = target.contains(state, tol);
    if (!cert.is_member) {
      c_.status = PostulateStatus::Fail;
      std::ostringstream os;
      os << what << " is not in " << target.name() << " (distance bound " << cert.distance_bound << ")";
      c_.detail = os.str();
      c_.counterexample = state;
    }
  }
  PostulateCheck done() {
    if (c_.status == PostulateStatus::Pass) c_.detail = std::to_string(c_.checks) + " checks";
    return c_;
  }

 private:
  PostulateCheck c_;
};

}  // namespace

std::string to_string(PostulateStatus s) {
  switch (s) {
    case PostulateStatus::Pass: return "pass";
    case PostulateStatus::Fail: return "FAIL";
    case PostulateStatus::NotFalsifiable: return "not falsifiable";
  }
  return "unknown";
}

bool PostulateReport::all_pass() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const PostulateCheck& c) { return c.status == PostulateStatus::Fail; });
}

std::string PostulateReport::to_text() const {
  std::ostringstream os;
  for (const PostulateCheck& c : checks) {
    static const char* roman[] = {"", "I", "II", "III", "IV", "V"};
    os << "Postulate " << roman[c.postulate] << " (" << c.name << "): " << to_string(c.status) << " - " << c.detail
       << "\n";
  }
  return os.str();
}

nlohmann::json PostulateReport::to_json() const {
  nlohmann::json j;
  j["family"] = family;
  j["all_pass"] = all_pass();
  j["postulates"] = nlohmann::json::array();
  for (const PostulateCheck& c : checks) {
    nlohmann::json e{{"postulate", c.postulate}, {"name", c.name}, {"status", to_string(c.status)},
                     {"checks", c.checks}, {"detail", c.detail}};
    if (c.counterexample) e["counterexample"] = io::to_json(*c.counterexample);
    j["postulates"].push_back(std::move(e));
  }
  return j;
}

PostulateReport validate_postulates(const FreeSetFamily& fam, int samples, std::uint64_t seed, double tol) {
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "validate_postulates: samples must be at least 1");
  Rng rng(seed);
  const std::vector<DensityMatrix> points = fam.extreme_points(std::max(8, 2 * samples), seed);
  std::vector<DensityMatrix> members;
  members.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) members.push_back(random_member(points, rng));

  const FreeSetFamily two = fam.n_copy(2);
  std::vector<DensityMatrix> pairs;
  for (int i = 0; i < samples; ++i)
    pairs.push_back(tensor_product(members[static_cast<std::size_t>(i)],
                                   members[static_cast<std::size_t>((i + 1) % samples)]));

  const std::vector<DensityMatrix> two_points = two.extreme_points(std::max(8, 2 * samples), seed + 1);
  std::vector<DensityMatrix> two_members;
  for (int i = 0; i < samples; ++i) two_members.push_back(random_member(two_points, rng));

  PostulateReport report;
  report.family = fam.name();

  Checker tensor(1, "closed under tensor products");
  for (std::size_t i = 0; i < pairs.size(); ++i) tensor.check(two, pairs[i], tol, "member pair " + std::to_string(i));
  report.checks.push_back(tensor.done());

  Checker trace(2, "closed under partial trace");
  auto trace_out = [&](const FreeSetFamily& f, const DensityMatrix& rho, const std::string& what) {
    const int s = rho.shape().factors();
    if (s < 2) return;
    for (int drop = 0; drop < s; ++drop) {
      std::vector<int> keep;
      for (int k = 0; k < s; ++k)
        if (k != drop) keep.push_back(k);
      trace.check(f.reduced(keep), partial_trace(rho, keep), tol, what + " traced over factor " + std::to_string(drop));
    }
  };
  for (std::size_t i = 0; i < members.size(); ++i) trace_out(fam, members[i], "member " + std::to_string(i));
  for (std::size_t i = 0; i < two_members.size(); ++i)
    trace_out(two, two_members[i], "2-copy member " + std::to_string(i));
  report.checks.push_back(trace.done());

  Checker perm(3, "closed under permutations");
  // Whole-copy permutations must map the n-copy family onto itself; other
  // permutations map onto the family of the permuted shape.
  auto permute_all = [&](const FreeSetFamily& f, const std::vector<DensityMatrix>& states, int block,
                         const std::string& what) {
    for (const std::vector<int>& p : permutations_of(f.shape().factors())) {
      bool copy_perm = block > 0;
      for (std::size_t k = 0; copy_perm && k < p.size(); ++k) {
        const int b = static_cast<int>(k) % block;
        copy_perm = p[k] % block == b && p[k] - b == p[k - static_cast<std::size_t>(b)];
      }
      const FreeSetFamily target = copy_perm ? f : f.permuted(p);
      for (std::size_t i = 0; i < states.size(); ++i)
        perm.check(target, permute_subsystems(states[i], p), tol, what + " " + std::to_string(i) + " permuted");
    }
  };
  permute_all(fam, members, 0, "member");
  permute_all(two, two_members, fam.shape().factors(), "2-copy member");
  report.checks.push_back(perm.done());

  PostulateCheck closed;
  closed.postulate = 4;
  closed.name = "closed set";
  closed.status = PostulateStatus::NotFalsifiable;
  closed.detail = "not falsifiable numerically; membership tolerance serves as closure proxy";
  report.checks.push_back(closed);

  Checker convex(5, "convex set");
  for (int i = 0; i < samples; ++i) {
    const DensityMatrix& a = members[static_cast<std::size_t>(i)];
    const DensityMatrix& b = members[static_cast<std::size_t>((i + 1) % samples)];
    for (int k = 1; k <= 9; ++k) {
      const double t = 0.1 * k;
      convex.check(fam, DensityMatrix::mix(t, a, b), tol, "mixture of members " + std::to_string(i));
    }
  }
  report.checks.push_back(convex.done());
  return report;
}

}  // namespace rescomp
