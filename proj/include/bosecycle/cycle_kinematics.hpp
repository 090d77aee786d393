#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <variant>
#include <vector>

namespace bosecycle {

using Vec = std::vector<double>;

/// Cycle lengths (n_0, ..., n_p). Particle indices are 1-based; cycle l
/// owns C_l = {N_{l-1}+1, ..., N_l}.
class CycleStructure {
  public:
    explicit CycleStructure(std::vector<int> lengths);

    int particles() const { return boundaries_.back(); }
    int cycles() const { return static_cast<int>(lengths_.size()); }
    int length(int l) const { return lengths_.at(l); }
    /// N_l; boundary(-1) is 0.
    int boundary(int l) const { return l < 0 ? 0 : boundaries_.at(l); }
    int first(int l) const { return boundary(l - 1) + 1; }
    int cycle_of(int q) const;
    const std::vector<int>& lengths() const { return lengths_; }

  private:
    std::vector<int> lengths_;
    std::vector<int> boundaries_;
};

/// One interaction (j, k, r): the pair j < k, its time t in [0, 1) and step x.
struct Interaction {
    int j = 1;
    int k = 2;
    double t = 0.0;
    Vec x;
};

struct AlphaAssignment {
    CycleStructure structure;
    int d = 1;
    std::vector<Interaction> edges;

    /// alpha^k_j: number of stored interactions on the pair.
    int multiplicity(int j, int k) const;
    /// Throws if an index, time or vector length is out of range.
    void validate() const;
};

/// Sparse multiplicity alpha for the pair (j, k); used by pattern expansion.
struct PairCount {
    int j = 1;
    int k = 2;
    int alpha = 1;
};

enum class GapFunction { Log, Sqrt, Doubling };

namespace pattern {
/// Explicit finite list of pairs inside cycle 0.
struct Rational {
    std::vector<PairCount> pairs;
};
/// alpha^k_{k-j} = a for j <= j0, every k >= 2.
struct Intracycle {
    int a = 1;
    int j0 = 1;
};
/// alpha^k_{k-j} = a for j <= k^theta.
struct PowerLaw {
    int a = 1;
    double theta = 0.25;
};
/// alpha^k_{k-j} = a for j <= j0 and k in a lacunary set K.
/// Log: K = primes (density 1/ln x); Sqrt: K = squares; Doubling: K = powers of 2.
struct Lacunary {
    int a = 1;
    int j0 = 1;
    GapFunction gap = GapFunction::Log;
};
}  // namespace pattern

/// Pair multiplicities inside cycle 0 plus entries coupling cycle 0 to the
/// particles outside it. A plus entry (j, k, alpha) means alpha^{+k}_j with
/// k counted from 1 among the outside particles.
struct AlphaPattern {
    std::variant<pattern::Rational, pattern::Intracycle, pattern::PowerLaw, pattern::Lacunary> kind;
    std::vector<PairCount> plus;

    void validate() const;
};

/// alpha^{+k}_j = a for j <= j0 and k = 1..partners.
std::vector<PairCount> plus_block(int a, int j0, int partners);

/// alpha^k_{k-j} = 1 for n-k0 <= j < k <= n.
pattern::Rational boundary_block(int n, int k0);

/// Nonzero intra-cycle multiplicities (j < k <= n) of the pattern.
std::vector<PairCount> intra_pairs(const AlphaPattern& p, int n);
/// Plus entries with outside index k <= N - n.
std::vector<PairCount> plus_pairs(const AlphaPattern& p, int n, int N);

struct AlphaNorms {
    std::int64_t zero = 0;
    std::int64_t plus = 0;
    std::int64_t total() const { return zero + plus; }
};

AlphaNorms alpha_norms(const AlphaAssignment& a);
AlphaNorms alpha_norms(const AlphaPattern& p, int n, int N);

using StepSampler = std::function<Vec(std::mt19937_64&)>;

/// Realizes the pattern on the structure (n, N-n) with uniform times and
/// steps drawn from `sampler`.
AlphaAssignment instantiate(const AlphaPattern& p, int n, int N, int d, std::mt19937_64& rng,
                            const StepSampler& sampler);

/// Z_q(t) evaluated term by term from its four-sum definition.
Vec z_profile(const AlphaAssignment& a, int q, double t);

/// Z^l_1 = Z_{N_{l-1}+1}(0).
Vec z_constraint(const AlphaAssignment& a, int l);

/// Average over C_l of the time integral of Z_q, by exact piecewise integration.
Vec cycle_mean_direct(const AlphaAssignment& a, int l);

/// Same average from the closed form in terms of (k-j) and (j-1+t) weights.
Vec cycle_mean_closed(const AlphaAssignment& a, int l);

/// (1/n_l) Sum_q Int |Z_q(t)|^2 dt by exact piecewise integration.
double cycle_second_moment_direct(const AlphaAssignment& a, int l = 0);

/// The same quantity for cycle 0 from the A-coefficient tables.
double cycle_second_moment(const AlphaAssignment& a);

/// A-coefficient tables for cycle 0. Indices are doubles so that callers can
/// break ties; the tables return nullopt when two indices coincide.
namespace atable {
std::optional<double> intra_intra(double j, double k, double t, double jp, double kp, double tp);
std::optional<double> intra_plus(double j, double k, double t, double jp, double tp);
double plus_plus(double j, double t, double jp, double tp);
}  // namespace atable

/// Overlap of the unrolled-time supports of two interactions of cycle 0.
/// Equals the table value for distinct indices and resolves coincidences.
double overlap_coefficient(const Interaction& e, const Interaction& f, int n0);

/// True iff every non-trivial component of the inter-cycle multigraph is bridgeless.
bool merger_check(const AlphaAssignment& a);

/// Rank of the linear system {Z^l_1 = 0} in the inter-cycle step components
/// (per spatial component).
int constraint_rank(const AlphaAssignment& a);

/// (#non-isolated cycles) - (#non-trivial components) via union-find.
int constraint_rank_bound(const AlphaAssignment& a);

}  // namespace bosecycle
