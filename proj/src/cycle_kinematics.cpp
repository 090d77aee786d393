#include "bosecycle/cycle_kinematics.hpp"

#include <algorithm>
#include <boost/rational.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bosecycle {

CycleStructure::CycleStructure(std::vector<int> lengths) : lengths_(std::move(lengths)) {
    if (lengths_.empty()) {
        throw std::invalid_argument("CycleStructure: need at least the zeroth cycle");
    }
    int acc = 0;
    for (int n : lengths_) {
        if (n < 1) {
            throw std::invalid_argument("CycleStructure: cycle lengths must be positive");
        }
        acc += n;
        boundaries_.push_back(acc);
    }
}

int CycleStructure::cycle_of(int q) const {
    if (q < 1 || q > particles()) {
        throw std::out_of_range("CycleStructure: particle index out of range");
    }
    const auto it = std::lower_bound(boundaries_.begin(), boundaries_.end(), q);
    return static_cast<int>(it - boundaries_.begin());
}

int AlphaAssignment::multiplicity(int j, int k) const {
    return static_cast<int>(
        std::count_if(edges.begin(), edges.end(), [&](const Interaction& e) { return e.j == j && e.k == k; }));
}

void AlphaAssignment::validate() const {
    const int N = structure.particles();
    for (const Interaction& e : edges) {
        if (!(1 <= e.j && e.j < e.k && e.k <= N)) {
            throw std::invalid_argument("AlphaAssignment: need 1 <= j < k <= N");
        }
        if (!(e.t >= 0.0 && e.t < 1.0)) {
            throw std::invalid_argument("AlphaAssignment: times must lie in [0, 1)");
        }
        if (static_cast<int>(e.x.size()) != d) {
            throw std::invalid_argument("AlphaAssignment: step dimension mismatch");
        }
        for (double c : e.x) {
            if (!std::isfinite(c)) {
                throw std::invalid_argument("AlphaAssignment: steps must be finite");
            }
        }
    }
}

// ---------------------------------------------------------------- patterns

namespace {

std::vector<int> lacunary_set(GapFunction g, int n) {
    std::vector<int> out;
    switch (g) {
        case GapFunction::Log: {
            std::vector<char> composite(static_cast<std::size_t>(n) + 1, 0);
            for (int i = 2; i <= n; ++i) {
                if (composite[i]) {
                    continue;
                }
                out.push_back(i);
                for (long long m = static_cast<long long>(i) * i; m <= n; m += i) {
                    composite[static_cast<std::size_t>(m)] = 1;
                }
            }
            break;
        }
        case GapFunction::Sqrt:
            for (long long i = 2; i * i <= n; ++i) {
                out.push_back(static_cast<int>(i * i));
            }
            break;
        case GapFunction::Doubling:
            for (long long k = 2; k <= n; k *= 2) {
                out.push_back(static_cast<int>(k));
            }
            break;
    }
    return out;
}

void push_gaps(std::vector<PairCount>& out, int k, int max_gap, int a) {
    for (int gap = 1; gap <= std::min(max_gap, k - 1); ++gap) {
        out.push_back({k - gap, k, a});
    }
}

}  // namespace

void AlphaPattern::validate() const {
    std::visit(
        [](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, pattern::Rational>) {
                for (const PairCount& c : p.pairs) {
                    if (!(1 <= c.j && c.j < c.k && c.alpha >= 1)) {
                        throw std::invalid_argument("Rational pattern: need j < k and alpha >= 1");
                    }
                }
            } else if constexpr (std::is_same_v<T, pattern::PowerLaw>) {
                if (p.a < 1 || !(p.theta > 0.0 && p.theta < 1.0)) {
                    throw std::invalid_argument("PowerLaw pattern: need a >= 1 and 0 < theta < 1");
                }
            } else {
                if (p.a < 1 || p.j0 < 1) {
                    throw std::invalid_argument("pattern: need a >= 1 and j0 >= 1");
                }
            }
        },
        kind);
    for (const PairCount& c : plus) {
        if (c.j < 1 || c.k < 1 || c.alpha < 1) {
            throw std::invalid_argument("plus entries: need j, k, alpha >= 1");
        }
    }
}

std::vector<PairCount> plus_block(int a, int j0, int partners) {
    std::vector<PairCount> out;
    for (int k = 1; k <= partners; ++k) {
        for (int j = 1; j <= j0; ++j) {
            out.push_back({j, k, a});
        }
    }
    return out;
}

pattern::Rational boundary_block(int n, int k0) {
    pattern::Rational r;
    // j is the gap: the pairs (k - j, k) span almost the whole cycle
    for (int k = std::max(2, n - k0 + 1); k <= n; ++k) {
        for (int gap = std::max(1, n - k0); gap < k; ++gap) {
            r.pairs.push_back({k - gap, k, 1});
        }
    }
    return r;
}

std::vector<PairCount> intra_pairs(const AlphaPattern& p, int n) {
    p.validate();
    std::vector<PairCount> out;
    std::visit(
        [&](const auto& kind) {
            using T = std::decay_t<decltype(kind)>;
            if constexpr (std::is_same_v<T, pattern::Rational>) {
                for (const PairCount& c : kind.pairs) {
                    if (c.k <= n) {
                        out.push_back(c);
                    }
                }
            } else if constexpr (std::is_same_v<T, pattern::Intracycle>) {
                for (int k = 2; k <= n; ++k) {
                    push_gaps(out, k, kind.j0, kind.a);
                }
            } else if constexpr (std::is_same_v<T, pattern::PowerLaw>) {
                for (int k = 2; k <= n; ++k) {
                    const int max_gap = static_cast<int>(std::floor(std::pow(k, kind.theta) + 1e-12));
                    push_gaps(out, k, max_gap, kind.a);
                }
            } else {
                for (int k : lacunary_set(kind.gap, n)) {
                    push_gaps(out, k, kind.j0, kind.a);
                }
            }
        },
        p.kind);
    return out;
}

std::vector<PairCount> plus_pairs(const AlphaPattern& p, int n, int N) {
    std::vector<PairCount> out;
    for (const PairCount& c : p.plus) {
        if (c.j <= n && c.k <= N - n) {
            out.push_back(c);
        }
    }
    return out;
}

AlphaNorms alpha_norms(const AlphaPattern& p, int n, int N) {
    if (n > N) {
        throw std::invalid_argument("alpha_norms: need n <= N");
    }
    AlphaNorms norms;
    for (const PairCount& c : intra_pairs(p, n)) {
        norms.zero += static_cast<std::int64_t>(c.k - c.j) * c.alpha;
    }
    for (const PairCount& c : plus_pairs(p, n, N)) {
        norms.plus += static_cast<std::int64_t>(c.j) * c.alpha;
    }
    return norms;
}

AlphaNorms alpha_norms(const AlphaAssignment& a) {
    const int n = a.structure.length(0);
    AlphaNorms norms;
    for (const Interaction& e : a.edges) {
        if (e.k <= n) {
            norms.zero += e.k - e.j;
        } else if (e.j <= n) {
            norms.plus += e.j;
        }
    }
    return norms;
}

AlphaAssignment instantiate(const AlphaPattern& p, int n, int N, int d, std::mt19937_64& rng,
                            const StepSampler& sampler) {
    if (n < 1 || N < n) {
        throw std::invalid_argument("instantiate: need 1 <= n <= N");
    }
    std::vector<int> lengths{n};
    if (N > n) {
        lengths.push_back(N - n);
    }
    AlphaAssignment out{CycleStructure(lengths), d, {}};
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto emit = [&](int j, int k, int alpha) {
        for (int r = 0; r < alpha; ++r) {
            out.edges.push_back({j, k, unif(rng), sampler(rng)});
        }
    };
    for (const PairCount& c : intra_pairs(p, n)) {
        emit(c.j, c.k, c.alpha);
    }
    for (const PairCount& c : plus_pairs(p, n, N)) {
        emit(c.j, n + c.k, c.alpha);
    }
    return out;
}

// ---------------------------------------------------------------- profiles

namespace {

void axpy(Vec& y, double a, const Vec& x) {
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] += a * x[i];
    }
}

double norm2(const Vec& v) {
    double acc = 0.0;
    for (double c : v) {
        acc += c * c;
    }
    return acc;
}

double dot(const Vec& a, const Vec& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

std::vector<double> breakpoints(const AlphaAssignment& a) {
    std::vector<double> b{0.0, 1.0};
    for (const Interaction& e : a.edges) {
        b.push_back(e.t);
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

template <typename F>
void integrate_cycle(const AlphaAssignment& a, int l, F&& accumulate) {
    const std::vector<double> b = breakpoints(a);
    for (int q = a.structure.first(l); q <= a.structure.boundary(l); ++q) {
        for (std::size_t i = 0; i + 1 < b.size(); ++i) {
            const double len = b[i + 1] - b[i];
            if (len <= 0.0) {
                continue;
            }
            accumulate(len, z_profile(a, q, 0.5 * (b[i] + b[i + 1])));
        }
    }
}

}  // namespace

Vec z_profile(const AlphaAssignment& a, int q, double t) {
    const CycleStructure& s = a.structure;
    const int l = s.cycle_of(q);
    const int Nl = s.boundary(l);
    const int N = s.particles();
    Vec z(static_cast<std::size_t>(a.d), 0.0);
    for (const Interaction& e : a.edges) {
        const bool before = e.t >= t;
        // first sum: j <= q-1, q <= k <= N_l
        if (before && e.j <= q - 1 && q <= e.k && e.k <= Nl) {
            axpy(z, -1.0, e.x);
        }
        // second sum: q <= j <= N_l, N_l+1 <= k <= N
        if (before && q <= e.j && e.j <= Nl && Nl + 1 <= e.k && e.k <= N) {
            axpy(z, 1.0, e.x);
        }
        // third sum: j <= q, q+1 <= k <= N_l
        if (!before && e.j <= q && q + 1 <= e.k && e.k <= Nl) {
            axpy(z, -1.0, e.x);
        }
        // fourth sum: q+1 <= j <= N_l, N_l+1 <= k <= N
        if (!before && q + 1 <= e.j && e.j <= Nl && Nl + 1 <= e.k && e.k <= N) {
            axpy(z, 1.0, e.x);
        }
    }
    return z;
}

Vec z_constraint(const AlphaAssignment& a, int l) { return z_profile(a, a.structure.first(l), 0.0); }

Vec cycle_mean_direct(const AlphaAssignment& a, int l) {
    Vec acc(static_cast<std::size_t>(a.d), 0.0);
    integrate_cycle(a, l, [&](double len, const Vec& z) { axpy(acc, len, z); });
    for (double& c : acc) {
        c /= a.structure.length(l);
    }
    return acc;
}

Vec cycle_mean_closed(const AlphaAssignment& a, int l) {
    const CycleStructure& s = a.structure;
    const int lo = s.first(l);
    const int hi = s.boundary(l);
    Vec acc(static_cast<std::size_t>(a.d), 0.0);
    for (const Interaction& e : a.edges) {
        const bool j_in = lo <= e.j && e.j <= hi;
        const bool k_in = lo <= e.k && e.k <= hi;
        if (j_in && k_in) {
            axpy(acc, -static_cast<double>(e.k - e.j), e.x);
        } else if (k_in && e.j < lo) {
            // from any earlier cycle, including cycle 0
            axpy(acc, -(e.k - lo + e.t), e.x);
        } else if (j_in && e.k > hi) {
            axpy(acc, e.j - lo + e.t, e.x);
        }
    }
    for (double& c : acc) {
        c /= s.length(l);
    }
    return acc;
}

double cycle_second_moment_direct(const AlphaAssignment& a, int l) {
    double acc = 0.0;
    integrate_cycle(a, l, [&](double len, const Vec& z) { acc += len * norm2(z); });
    return acc / a.structure.length(l);
}

// ---------------------------------------------------------------- A tables

namespace atable {

std::optional<double> intra_intra(double j, double k, double t, double jp, double kp, double tp) {
    if ((jp < kp && kp < j && j < k) || (j < k && k < jp && jp < kp)) {
        return 0.0;
    }
    if (jp < j && j < k && k < kp) {
        return k - j;
    }
    if (j < jp && jp < kp && kp < k) {
        return kp - jp;
    }
    if (j < jp && jp < k && k < kp) {
        return k - jp + t - tp;
    }
    if (jp < j && j < kp && kp < k) {
        return kp - j + tp - t;
    }
    return std::nullopt;
}

std::optional<double> intra_plus(double j, double k, double t, double jp, double tp) {
    if (k < jp) {
        return k - j;
    }
    if (j < jp && jp < k) {
        return jp - j + tp - t;
    }
    if (jp < j) {
        return 0.0;
    }
    return std::nullopt;
}

double plus_plus(double j, double t, double jp, double tp) { return std::min(j - 1 + t, jp - 1 + tp); }

}  // namespace atable

double overlap_coefficient(const Interaction& e, const Interaction& f, int n0) {
    auto support = [n0](const Interaction& g) -> std::pair<double, double> {
        if (g.k <= n0) {
            return {g.j - 1 + g.t, g.k - 1 + g.t};
        }
        if (g.j <= n0) {
            return {0.0, g.j - 1 + g.t};
        }
        return {0.0, 0.0};
    };
    const auto [a0, a1] = support(e);
    const auto [b0, b1] = support(f);
    return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

double cycle_second_moment(const AlphaAssignment& a) {
    const int n = a.structure.length(0);
    std::vector<const Interaction*> intra;
    std::vector<const Interaction*> plus;
    for (const Interaction& e : a.edges) {
        if (e.k <= n) {
            intra.push_back(&e);
        } else if (e.j <= n) {
            plus.push_back(&e);
        }
    }

    double total = 0.0;
    for (const Interaction* e : intra) {
        for (const Interaction* f : intra) {
            double coef = 0.0;
            if (e == f) {
                coef = e->k - e->j;
            } else if (auto v = atable::intra_intra(e->j, e->k, e->t, f->j, f->k, f->t)) {
                coef = *v;
            } else {
                coef = overlap_coefficient(*e, *f, n);
            }
            total += coef * dot(e->x, f->x);
        }
    }
    for (const Interaction* e : plus) {
        for (const Interaction* f : plus) {
            total += atable::plus_plus(e->j, e->t, f->j, f->t) * dot(e->x, f->x);
        }
    }
    for (const Interaction* e : intra) {
        for (const Interaction* f : plus) {
            double coef = 0.0;
            if (auto v = atable::intra_plus(e->j, e->k, e->t, f->j, f->t)) {
                coef = *v;
            } else {
                coef = overlap_coefficient(*e, *f, n);
            }
            total -= 2.0 * coef * dot(e->x, f->x);
        }
    }
    return total / n;
}

// ---------------------------------------------------------------- graph

namespace {

struct CycleGraph {
    int vertices = 0;
    std::vector<std::pair<int, int>> edges;
};

CycleGraph inter_cycle_graph(const AlphaAssignment& a) {
    CycleGraph g;
    g.vertices = a.structure.cycles();
    for (const Interaction& e : a.edges) {
        const int u = a.structure.cycle_of(e.j);
        const int v = a.structure.cycle_of(e.k);
        if (u != v) {
            g.edges.emplace_back(u, v);
        }
    }
    return g;
}

struct BridgeFinder {
    const CycleGraph& g;
    std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbour, edge id)
    std::vector<int> disc, low;
    int timer = 0;
    bool bridge = false;

    explicit BridgeFinder(const CycleGraph& graph)
        : g(graph), adj(graph.vertices), disc(graph.vertices, -1), low(graph.vertices, 0) {
        for (int id = 0; id < static_cast<int>(g.edges.size()); ++id) {
            adj[g.edges[id].first].emplace_back(g.edges[id].second, id);
            adj[g.edges[id].second].emplace_back(g.edges[id].first, id);
        }
    }

    void visit(int u, int parent_edge) {
        disc[u] = low[u] = timer++;
        for (const auto& [v, id] : adj[u]) {
            if (id == parent_edge) {
                continue;
            }
            if (disc[v] < 0) {
                visit(v, id);
                low[u] = std::min(low[u], low[v]);
                if (low[v] > disc[u]) {
                    bridge = true;
                }
            } else {
                low[u] = std::min(low[u], disc[v]);
            }
        }
    }
};

}  // namespace

bool merger_check(const AlphaAssignment& a) {
    const CycleGraph g = inter_cycle_graph(a);
    BridgeFinder finder(g);
    for (int v = 0; v < g.vertices; ++v) {
        if (finder.disc[v] < 0) {
            finder.visit(v, -1);
        }
    }
    return !finder.bridge;
}

int constraint_rank(const AlphaAssignment& a) {
    const CycleGraph g = inter_cycle_graph(a);
    const int rows = g.vertices;
    const int cols = static_cast<int>(g.edges.size());
    using Q = boost::rational<long long>;
    std::vector<std::vector<Q>> m(rows, std::vector<Q>(cols, Q(0)));
    for (int c = 0; c < cols; ++c) {
        m[g.edges[c].first][c] += 1;
        m[g.edges[c].second][c] -= 1;
    }
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r) {
            if (m[r][c] != Q(0)) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) {
            continue;
        }
        std::swap(m[pivot], m[rank]);
        for (int r = rank + 1; r < rows; ++r) {
            if (m[r][c] == Q(0)) {
                continue;
            }
            const Q factor = m[r][c] / m[rank][c];
            for (int cc = c; cc < cols; ++cc) {
                m[r][cc] -= factor * m[rank][cc];
            }
        }
        ++rank;
    }
    return rank;
}

int constraint_rank_bound(const AlphaAssignment& a) {
    const CycleGraph g = inter_cycle_graph(a);
    std::vector<int> parent(g.vertices);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<char> touched(g.vertices, 0);
    auto find = [&](int v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (const auto& [u, v] : g.edges) {
        touched[u] = touched[v] = 1;
        parent[find(u)] = find(v);
    }
    int non_isolated = 0;
    int components = 0;
    for (int v = 0; v < g.vertices; ++v) {
        if (touched[v]) {
            ++non_isolated;
            if (find(v) == v) {
                ++components;
            }
        }
    }
    return non_isolated - components;
}

}  // namespace bosecycle
