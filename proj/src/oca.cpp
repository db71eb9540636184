#include "ppda/oca.hh"

#include "ppda/error.hh"
#include "ppda/text_format.hh"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>

namespace ppda {

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

int symX(const Ppda& s) { return s.symbolIndex("X"); }
int symZ(const Ppda& s) { return s.symbolIndex("Z"); }

// Configurations (s, c) for 0 <= c <= height; the top level is left unexpanded.
struct CounterSystem {
    int k = 0;
    int height = 0;
    Plts lts;
    int id(int s, int c) const { return c * k + s; }
};

CounterSystem buildCounterSystem(const Ppda& spec, int height)
{
    CounterSystem cs;
    cs.k = static_cast<int>(spec.states.size());
    cs.height = height;
    cs.lts.actions = spec.actions;
    int x = symX(spec), z = symZ(spec);
    HeadIndex idx(spec);
    for (int c = 0; c <= height; ++c)
        for (int s = 0; s < cs.k; ++s)
            cs.lts.addState(renderConfiguration(spec, ocaConfig(spec, s, c)));
    for (int c = 0; c < height; ++c)
        for (int s = 0; s < cs.k; ++s)
            for (int ri : idx.rules(s, c == 0 ? z : x)) {
                const Rule& r = spec.rules[ri];
                std::vector<std::pair<int, Rational>> d;
                for (const auto& [t, w] : r.dist.entries())
                    d.emplace_back(cs.id(t.state, c - 1 + static_cast<int>(t.push.size())), w);
                cs.lts.addMove(cs.id(s, c), r.action, std::move(d));
            }
    return cs;
}

// Approximant levels on the counter system joined with F_Delta.  Returns the
// partition at each requested depth; F_Delta states sit after the counter states.
struct JointLevels {
    CounterSystem cs;
    int fOffset = 0;
    std::vector<Partition> levels;
};

JointLevels jointLevels(const Ppda& spec, int height, int depth)
{
    JointLevels jl;
    jl.cs = buildCounterSystem(spec, height);
    jl.fOffset = jl.cs.lts.size();
    Plts joint = disjointUnion(jl.cs.lts, underlyingFlts(spec));
    std::vector<int> budget(joint.size(), depth);
    for (int c = 0; c <= height; ++c)
        for (int s = 0; s < jl.cs.k; ++s)
            budget[jl.cs.id(s, c)] = std::min(depth, height - c);
    jl.levels = refineLevels(joint, budget, depth);
    return jl;
}

std::vector<std::pair<int, int>> incFromLevels(const JointLevels& jl, int mLimit)
{
    int k = jl.cs.k;
    const Partition& P = jl.levels.at(k);
    std::vector<std::pair<int, int>> inc;
    for (int m = 0; m < mLimit; ++m)
        for (int p = 0; p < k; ++p) {
            bool compatible = false;
            for (int q = 0; q < k && !compatible; ++q)
                compatible = P.same(jl.cs.id(p, m), jl.fOffset + q);
            if (!compatible)
                inc.emplace_back(p, m);
        }
    return inc;
}

std::vector<std::pair<int, int>> incPairs(const Ppda& spec, int mLimit)
{
    int k = static_cast<int>(spec.states.size());
    if (mLimit < 0)
        mLimit = k;
    auto jl = jointLevels(spec, mLimit + k, k);
    return incFromLevels(jl, mLimit);
}

// popLen[s][r]: shortest path from sX.beta to r.beta that never touches beta.
std::vector<std::vector<int>> popLengths(const Ppda& spec)
{
    int k = static_cast<int>(spec.states.size());
    int x = symX(spec);
    HeadIndex idx(spec);
    std::vector<std::vector<int>> pl(k, std::vector<int>(k, kInf));
    bool changed = true;
    while (changed) {
        changed = false;
        for (int s = 0; s < k; ++s)
            for (int ri : idx.rules(s, x))
                for (const auto& [t, w] : spec.rules[ri].dist.entries()) {
                    (void)w;
                    for (int r = 0; r < k; ++r) {
                        int len = kInf;
                        if (t.push.empty())
                            len = (t.state == r) ? 1 : kInf;
                        else if (t.push.size() == 1)
                            len = pl[t.state][r] < kInf ? 1 + pl[t.state][r] : kInf;
                        else
                            for (int u = 0; u < k; ++u)
                                if (pl[t.state][u] < kInf && pl[u][r] < kInf)
                                    len = std::min(len, 1 + pl[t.state][u] + pl[u][r]);
                        if (len < pl[s][r]) {
                            pl[s][r] = len;
                            changed = true;
                        }
                    }
                }
    }
    return pl;
}

// Exact distances to INC for all (s, c) with c <= level, excursions above the
// top level folded into pop summaries.
std::vector<int> distTable(const Ppda& spec, int level, const std::vector<std::pair<int, int>>& inc)
{
    int k = static_cast<int>(spec.states.size());
    int x = symX(spec), z = symZ(spec);
    HeadIndex idx(spec);
    auto pl = popLengths(spec);
    int n = k * (level + 1);
    auto id = [&](int s, int c) { return c * k + s; };
    std::vector<std::vector<std::pair<int, int>>> rev(n); // (pred, cost)
    for (int c = 0; c <= level; ++c)
        for (int s = 0; s < k; ++s)
            for (int ri : idx.rules(s, c == 0 ? z : x))
                for (const auto& [t, w] : spec.rules[ri].dist.entries()) {
                    (void)w;
                    int nc = c - 1 + static_cast<int>(t.push.size());
                    if (nc <= level) {
                        rev[id(t.state, nc)].emplace_back(id(s, c), 1);
                    } else {
                        for (int r = 0; r < k; ++r)
                            if (pl[t.state][r] < kInf)
                                rev[id(r, c)].emplace_back(id(s, c), 1 + pl[t.state][r]);
                    }
                }
    std::vector<int> dist(n, kInf);
    using QE = std::pair<int, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
    for (auto [s, m] : inc)
        if (m <= level) {
            dist[id(s, m)] = 0;
            pq.emplace(0, id(s, m));
        }
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d != dist[v])
            continue;
        for (auto [u, cost] : rev[v])
            if (d + cost < dist[u]) {
                dist[u] = d + cost;
                pq.emplace(dist[u], u);
            }
    }
    return dist;
}

// Local consistency of a pair: supports of both sides are merged along pairs
// in R, then every move must find a partner with equal class masses.
template <class InR>
bool locallyConsistent(const std::vector<Move>& ms, const std::vector<Move>& mt, InR inR, std::string* reason)
{
    std::vector<int> ss, ts;
    for (const auto& m : ms)
        for (const auto& e : m.dist.entries())
            ss.push_back(e.first);
    for (const auto& m : mt)
        for (const auto& e : m.dist.entries())
            ts.push_back(e.first);
    std::sort(ss.begin(), ss.end());
    ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    std::unordered_map<int, int> parent;
    std::function<int(int)> find = [&](int v) {
        auto it = parent.find(v);
        if (it == parent.end() || it->second == v)
            return v;
        int r = find(it->second);
        parent[v] = r;
        return r;
    };
    for (int a : ss)
        for (int b : ts)
            if (inR(a, b)) {
                int ra = find(a), rb = find(b);
                if (ra != rb)
                    parent[std::max(ra, rb)] = std::min(ra, rb);
            }
    auto lift = [&](const Move& m) {
        std::map<int, Rational> cls;
        for (const auto& [t, w] : m.dist.entries())
            cls[find(t)] += w;
        return std::make_pair(m.action, std::vector<std::pair<int, Rational>>(cls.begin(), cls.end()));
    };
    std::vector<std::pair<int, std::vector<std::pair<int, Rational>>>> ls, lt;
    for (const auto& m : ms)
        ls.push_back(lift(m));
    for (const auto& m : mt)
        lt.push_back(lift(m));
    auto covered = [](const auto& a, const auto& b) {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (std::find(b.begin(), b.end(), a[i]) == b.end())
                return static_cast<int>(i);
        return -1;
    };
    int bad = covered(ls, lt);
    if (bad >= 0) {
        if (reason)
            *reason = "left move " + std::to_string(bad) + " has no matching right move";
        return false;
    }
    bad = covered(lt, ls);
    if (bad >= 0) {
        if (reason)
            *reason = "right move " + std::to_string(bad) + " has no matching left move";
        return false;
    }
    return true;
}

} // namespace

void requirePoca(const Ppda& spec)
{
    auto rep = validate(spec);
    if (!rep.empty())
        throw Error(ErrorCode::Unvalidated, rep.front().message);
    std::string why;
    if (!pocaShape(spec, &why))
        throw Error(ErrorCode::NotPoca, why);
}

Configuration ocaConfig(const Ppda& spec, int state, int counter)
{
    Configuration c;
    c.state = state;
    c.stack.assign(counter, symX(spec));
    c.stack.push_back(symZ(spec));
    return c;
}

bool ocaCoordinates(const Ppda& spec, const Configuration& c, int* state, int* counter)
{
    int x = symX(spec), z = symZ(spec);
    if (c.stack.empty() || c.stack.back() != z)
        return false;
    for (std::size_t i = 0; i + 1 < c.stack.size(); ++i)
        if (c.stack[i] != x)
            return false;
    *state = c.state;
    *counter = static_cast<int>(c.stack.size()) - 1;
    return true;
}

Plts underlyingFlts(const Ppda& spec)
{
    requirePoca(spec);
    Plts f;
    f.actions = spec.actions;
    for (const auto& s : spec.states)
        f.addState(s);
    int x = symX(spec);
    for (const Rule& r : spec.rules) {
        if (r.symbol != x)
            continue;
        std::map<int, Rational> d;
        for (const auto& [t, w] : r.dist.entries())
            d[t.state] += w;
        f.addMove(r.state, r.action, std::vector<std::pair<int, Rational>>(d.begin(), d.end()));
    }
    return f;
}

std::vector<Configuration> computeInc(const Ppda& spec, int mLimit)
{
    requirePoca(spec);
    std::vector<Configuration> out;
    for (auto [p, m] : incPairs(spec, mLimit))
        out.push_back(ocaConfig(spec, p, m));
    std::sort(out.begin(), out.end(), [](const Configuration& a, const Configuration& b) {
        return a.stack.size() != b.stack.size() ? a.stack.size() < b.stack.size() : a.state < b.state;
    });
    return out;
}

std::string DistResult::str() const
{
    return finite ? std::to_string(value) : "INFINITY_UP_TO(" + std::to_string(value) + ")";
}

DistResult computeDist(const Ppda& spec, const Configuration& c, int maxSteps)
{
    requirePoca(spec);
    int p0, m0;
    if (!ocaCoordinates(spec, c, &p0, &m0))
        throw Error(ErrorCode::Shape, "configuration is not of the form pX^mZ");
    std::set<std::pair<int, int>> inc;
    for (auto pm : incPairs(spec, -1))
        inc.insert(pm);
    int x = symX(spec), z = symZ(spec);
    HeadIndex idx(spec);
    std::set<std::pair<int, int>> seen{{p0, m0}};
    std::deque<std::pair<std::pair<int, int>, int>> q{{{p0, m0}, 0}};
    while (!q.empty()) {
        auto [v, d] = q.front();
        q.pop_front();
        if (inc.count(v))
            return DistResult{true, d};
        if (d == maxSteps)
            continue;
        auto [s, cnt] = v;
        for (int ri : idx.rules(s, cnt == 0 ? z : x))
            for (const auto& [t, w] : spec.rules[ri].dist.entries()) {
                (void)w;
                std::pair<int, int> nv{t.state, cnt - 1 + static_cast<int>(t.push.size())};
                if (seen.insert(nv).second)
                    q.push_back({nv, d + 1});
            }
    }
    return DistResult{false, maxSteps};
}

std::optional<int> exactDist(const Ppda& spec, int state, int counter)
{
    requirePoca(spec);
    int k = static_cast<int>(spec.states.size());
    auto inc = incPairs(spec, -1);
    int level = std::max(counter, k) + 1;
    auto dist = distTable(spec, level, inc);
    int d = dist[counter * k + state];
    if (d >= kInf)
        return std::nullopt;
    return d;
}

const char* backgroundName(Background b)
{
    switch (b) {
    case Background::Colour1: return "COLOUR_1";
    case Background::Colour0: return "COLOUR_0";
    case Background::NotBackground: return "NOT_BACKGROUND";
    }
    return "?";
}

Background classifyBackground(const Ppda& spec, const GridPoint& g, int kDepth, int distBudget)
{
    requirePoca(spec);
    if (kDepth < 0)
        kDepth = static_cast<int>(spec.states.size());
    Configuration a = ocaConfig(spec, g.p, g.m), b = ocaConfig(spec, g.q, g.n);
    auto resolve = [&](const Configuration& c, int s, int m) -> std::optional<int> {
        auto d = computeDist(spec, c, distBudget);
        if (d.finite)
            return d.value;
        if (exactDist(spec, s, m))
            throw Error(ErrorCode::BudgetExceeded, "dist of " + renderConfiguration(spec, c) + " exceeds " +
                                                       std::to_string(distBudget) + " steps");
        return std::nullopt;
    };
    auto da = resolve(a, g.p, g.m), db = resolve(b, g.q, g.n);
    if (!da && !db)
        return bisimDepth(spec, a, b, kDepth).equivalent ? Background::Colour1 : Background::Colour0;
    if (da && db && *da == *db)
        return Background::NotBackground;
    return Background::Colour0;
}

ConsistencyResult consistencyCheck(const Plts& lts, const std::vector<char>& expanded,
                                   const std::vector<std::pair<int, int>>& R)
{
    std::set<std::pair<int, int>> rs(R.begin(), R.end());
    auto inR = [&](int a, int b) { return rs.count({a, b}) > 0; };
    for (auto [s, t] : R) {
        if (!expanded.at(s) || !expanded.at(t))
            throw Error(ErrorCode::Frontier, "pair (" + std::to_string(s) + ", " + std::to_string(t) +
                                                 ") has unexplored successors");
        std::string why;
        if (!locallyConsistent(lts.out[s], lts.out[t], inR, &why))
            return ConsistencyResult{false, s, t, why};
    }
    return ConsistencyResult{};
}

std::vector<char> expandedStates(const Ball& ball)
{
    std::vector<char> e(ball.lts.size());
    for (int s = 0; s < ball.lts.size(); ++s)
        e[s] = ball.closed || ball.depth[s] < ball.radius;
    return e;
}

std::vector<std::pair<int, int>> pairsOf(const Partition& p)
{
    std::vector<std::pair<int, int>> out;
    for (const auto& b : p.blocks())
        for (int s : b)
            for (int t : b)
                out.emplace_back(s, t);
    return out;
}

const char* gridVerdictName(GridVerdict v)
{
    switch (v) {
    case GridVerdict::BisimilarCertified: return "BISIMILAR_CERTIFIED";
    case GridVerdict::NotBisimilar: return "NOT_BISIMILAR";
    case GridVerdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

namespace {

// Background colours and successor structure for all points up to (mTop, nTop).
struct GridTables {
    int k = 0;
    int top = 0;
    CounterSystem cs;
    std::vector<int> dist;       // per (s, c), c <= top
    Partition simK;              // ~_kDepth on the counter system
    int distBudget = 0;

    Background kind(int m, int n, int p, int q) const
    {
        int da = dist[m * k + p], db = dist[n * k + q];
        bool ia = da >= kInf, ib = db >= kInf;
        if ((!ia && da > distBudget) || (!ib && db > distBudget))
            return Background::NotBackground;
        if (ia && ib)
            return simK.same(cs.id(p, m), cs.id(q, n)) ? Background::Colour1 : Background::Colour0;
        if (!ia && !ib && da == db)
            return Background::NotBackground;
        return Background::Colour0;
    }
};

GridTables buildTables(const Ppda& spec, int top, int kDepth, int distBudget)
{
    GridTables gt;
    gt.k = static_cast<int>(spec.states.size());
    gt.top = top;
    gt.distBudget = distBudget;
    int depth = std::max(kDepth, gt.k);
    auto jl = jointLevels(spec, top + 1 + depth, depth);
    auto inc = incFromLevels(jl, gt.k);
    gt.simK = jl.levels.at(kDepth);
    gt.cs = std::move(jl.cs);
    gt.dist = distTable(spec, top + 1, inc);
    return gt;
}

} // namespace

GridResult decideBoundedGrid(const Ppda& spec, const Configuration& c1, const Configuration& c2, GridBounds b)
{
    requirePoca(spec);
    int k = static_cast<int>(spec.states.size());
    int p0, m0, q0, n0;
    if (!ocaCoordinates(spec, c1, &p0, &m0) || !ocaCoordinates(spec, c2, &q0, &n0))
        throw Error(ErrorCode::Shape, "grid queries need configurations pX^mZ");
    if (b.mMax < 0)
        b.mMax = std::max(k * k, m0);
    if (b.nMax < 0)
        b.nMax = std::max(k * k, n0);
    if (b.kDepth < 0)
        b.kDepth = k;
    if (b.distBudget < 0)
        b.distBudget = 1000000;
    if (m0 > b.mMax || n0 > b.nMax)
        throw Error(ErrorCode::Shape, "query lies outside the grid bounds");

    GridResult res;
    res.bounds = b;
    res.k = k;
    int M = b.mMax, N = b.nMax;
    auto gt = buildTables(spec, std::max(M, N) + 1, b.kDepth, b.distBudget);

    // extended grid includes one ring beyond the region
    auto ext = [&](int m, int n, int p, int q) { return ((m * (N + 2) + n) * k + p) * k + q; };
    std::size_t extSize = static_cast<std::size_t>(M + 2) * (N + 2) * k * k;
    std::vector<Background> kinds(extSize);
    for (int m = 0; m <= M + 1; ++m)
        for (int n = 0; n <= N + 1; ++n)
            for (int p = 0; p < k; ++p)
                for (int q = 0; q < k; ++q)
                    kinds[ext(m, n, p, q)] = gt.kind(m, n, p, q);

    auto inRegion = [&](int m, int n) { return m <= M && n <= N; };
    auto fixpoint = [&](signed char unresolved) {
        std::vector<signed char> val(extSize);
        for (int m = 0; m <= M + 1; ++m)
            for (int n = 0; n <= N + 1; ++n)
                for (int p = 0; p < k; ++p)
                    for (int q = 0; q < k; ++q) {
                        auto kd = kinds[ext(m, n, p, q)];
                        signed char v = kd == Background::Colour1 ? 1 : kd == Background::Colour0 ? 0 : 1;
                        if (kd == Background::NotBackground && !inRegion(m, n))
                            v = unresolved;
                        val[ext(m, n, p, q)] = v;
                    }
        auto cfgOf = [&](int id, int* s, int* c) {
            *s = id % k;
            *c = id / k;
        };
        bool changed = true;
        while (changed) {
            changed = false;
            for (int m = 0; m <= M; ++m)
                for (int n = 0; n <= N; ++n)
                    for (int p = 0; p < k; ++p)
                        for (int q = 0; q < k; ++q) {
                            int i = ext(m, n, p, q);
                            if (kinds[i] != Background::NotBackground || val[i] == 0)
                                continue;
                            auto inR = [&](int a, int bb) {
                                int sa, ca, sb, cb;
                                cfgOf(a, &sa, &ca);
                                cfgOf(bb, &sb, &cb);
                                return val[ext(ca, cb, sa, sb)] == 1;
                            };
                            if (!locallyConsistent(gt.cs.lts.out[gt.cs.id(p, m)], gt.cs.lts.out[gt.cs.id(q, n)], inR,
                                                   nullptr)) {
                                val[i] = 0;
                                changed = true;
                            }
                        }
        }
        return val;
    };

    auto pess = fixpoint(0);
    res.colour.assign(static_cast<std::size_t>(M + 1) * (N + 1) * k * k, 0);
    res.kind.assign(res.colour.size(), Background::NotBackground);
    for (int m = 0; m <= M; ++m)
        for (int n = 0; n <= N; ++n)
            for (int p = 0; p < k; ++p)
                for (int q = 0; q < k; ++q) {
                    res.colour[res.at(m, n, p, q)] = pess[ext(m, n, p, q)];
                    res.kind[res.at(m, n, p, q)] = kinds[ext(m, n, p, q)];
                }

    auto witness = [&]() {
        auto v = bisimDepth(spec, c1, c2, b.witnessCap);
        return v.equivalent ? -1 : v.depth;
    };
    Background qk = kinds[ext(m0, n0, p0, q0)];
    if (qk == Background::Colour1) {
        res.verdict = GridVerdict::BisimilarCertified;
        res.reason = "background point: both dist infinite and ~_k holds";
        return res;
    }
    if (qk == Background::Colour0) {
        res.verdict = GridVerdict::NotBisimilar;
        res.witnessDepth = witness();
        res.reason = "background point: dist differs or ~_k fails";
        return res;
    }
    if (pess[ext(m0, n0, p0, q0)] == 1) {
        res.verdict = GridVerdict::BisimilarCertified;
        res.reason = "pair kept by the greatest consistent colouring of the region";
        return res;
    }
    int wd = witness();
    if (wd >= 0) {
        res.verdict = GridVerdict::NotBisimilar;
        res.witnessDepth = wd;
        res.reason = "approximant distinguishes the pair";
        return res;
    }
    auto opt = fixpoint(1);
    res.verdict = GridVerdict::Inconclusive;
    res.reason = opt[ext(m0, n0, p0, q0)] == 1
                     ? "pair depends on belt points beyond the region bounds"
                     : "pair erased but no distinguishing depth up to " + std::to_string(b.witnessCap);
    return res;
}

std::uint64_t periodPsi(int k)
{
    if (k < 0 || k > 20)
        throw Error(ErrorCode::Shape, "k! exceeds 64 bits");
    std::uint64_t f = 1;
    for (int i = 2; i <= k; ++i)
        f *= static_cast<std::uint64_t>(i);
    return f;
}

Colouring parseCertificate(const Ppda& spec, const std::string& text)
{
    auto bad = [](int ln, const std::string& m) {
        return Error(ErrorCode::MalformedCertificate, "line " + std::to_string(ln) + ": " + m);
    };
    Colouring chi;
    std::istringstream is(text);
    std::string line;
    int ln = 0;
    bool header = false, ended = false;
    Belt* cur = nullptr;
    while (std::getline(is, line)) {
        ++ln;
        auto h = line.find('#');
        if (h != std::string::npos)
            line = line.substr(0, h);
        auto t = splitWs(line);
        if (t.empty())
            continue;
        if (ended)
            throw bad(ln, "content after 'end'");
        try {
            if (t[0] == "certificate") {
                header = true;
            } else if (!header) {
                throw bad(ln, "missing 'certificate' header");
            } else if (t[0] == "k" && t.size() == 2) {
                chi.k = std::stoi(t[1]);
            } else if (t[0] == "psi" && t.size() == 2) {
                chi.psi = std::stoull(t[1]);
            } else if (t[0] == "bounds" && t.size() == 3) {
                chi.mBound = std::stoi(t[1]);
                chi.nBound = std::stoi(t[2]);
            } else if (t[0] == "point" && t.size() == 6) {
                int p = spec.stateIndex(t[3]), q = spec.stateIndex(t[4]);
                if (p < 0 || q < 0)
                    throw bad(ln, "unknown control state");
                int c = std::stoi(t[5]);
                if (c != 0 && c != 1)
                    throw bad(ln, "colour must be 0 or 1");
                chi.points[{std::stoi(t[1]), std::stoi(t[2]), p, q}] = c;
            } else if (t[0] == "belt" && t.size() == 5) {
                Belt b;
                b.c = std::stoi(t[1]);
                b.d = std::stoi(t[2]);
                b.offset = std::stoi(t[3]);
                b.thickness = std::stoi(t[4]);
                chi.belts.push_back(b);
                cur = &chi.belts.back();
            } else if (t[0] == "row" && t.size() == 4) {
                if (!cur)
                    throw bad(ln, "row outside a belt block");
                std::size_t j = std::stoul(t[1]), ph = std::stoul(t[2]);
                if (cur->pattern.size() <= j)
                    cur->pattern.resize(j + 1);
                if (cur->pattern[j].size() <= ph)
                    cur->pattern[j].resize(ph + 1);
                cur->pattern[j][ph] = t[3];
            } else if (t[0] == "end") {
                ended = true;
            } else {
                throw bad(ln, "unrecognised line");
            }
        } catch (const std::invalid_argument&) {
            throw bad(ln, "expected a number");
        } catch (const std::out_of_range&) {
            throw bad(ln, "number out of range");
        }
    }
    if (!header || !ended)
        throw bad(ln, "certificate must start with 'certificate' and finish with 'end'");
    return chi;
}

std::string renderCertificate(const Ppda& spec, const Colouring& chi)
{
    std::ostringstream os;
    os << "certificate\nk " << chi.k << "\npsi " << chi.psi << "\nbounds " << chi.mBound << " " << chi.nBound << "\n";
    for (const auto& [key, c] : chi.points) {
        auto [m, n, p, q] = key;
        os << "point " << m << " " << n << " " << spec.states[p] << " " << spec.states[q] << " " << c << "\n";
    }
    for (const auto& b : chi.belts) {
        os << "belt " << b.c << " " << b.d << " " << b.offset << " " << b.thickness << "\n";
        for (std::size_t j = 0; j < b.pattern.size(); ++j)
            for (std::size_t ph = 0; ph < b.pattern[j].size(); ++ph)
                os << "row " << j << " " << ph << " " << b.pattern[j][ph] << "\n";
    }
    os << "end\n";
    return os.str();
}

namespace {

void checkWellFormed(const Ppda& spec, const Colouring& chi)
{
    auto bad = [](const std::string& m) { return Error(ErrorCode::MalformedCertificate, m); };
    int k = static_cast<int>(spec.states.size());
    if (chi.k != k)
        throw bad("k differs from the number of control states");
    if (chi.psi != periodPsi(k))
        throw bad("psi must equal k!");
    if (chi.mBound < 0 || chi.nBound < 0)
        throw bad("negative bounds");
    for (int m = 0; m <= chi.mBound; ++m)
        for (int n = 0; n <= chi.nBound; ++n)
            for (int p = 0; p < k; ++p)
                for (int q = 0; q < k; ++q)
                    if (!chi.points.count({m, n, p, q}))
                        throw bad("explicit region misses point (" + std::to_string(m) + ", " + std::to_string(n) +
                                  ", " + spec.states[p] + ", " + spec.states[q] + ")");
    for (const auto& [key, c] : chi.points) {
        auto [m, n, p, q] = key;
        (void)p;
        (void)q;
        (void)c;
        if (m < 0 || n < 0 || m > chi.mBound || n > chi.nBound)
            throw bad("explicit point outside the declared bounds");
    }
    if (chi.psi > 5040)
        throw bad("period too large for an explicit belt pattern");
    for (const auto& b : chi.belts) {
        if (b.c < 1 || b.d < 1 || b.c > k * k || b.d > k * k)
            throw bad("belt slope components must lie in 1..k^2");
        if (b.thickness < 1)
            throw bad("belt thickness must be positive");
        if (static_cast<int>(b.pattern.size()) != b.thickness)
            throw bad("belt pattern must have one row group per thickness unit");
        for (const auto& rows : b.pattern) {
            if (rows.size() != chi.psi * static_cast<std::uint64_t>(b.d))
                throw bad("belt pattern must cover psi*d phases");
            for (const auto& r : rows)
                if (static_cast<int>(r.size()) != k * k ||
                    r.find_first_not_of("01") != std::string::npos)
                    throw bad("belt pattern rows hold k^2 binary colours");
        }
    }
}

} // namespace

CertificateVerdict verifyPeriodicCertificate(const Ppda& spec, const Colouring& chi)
{
    requirePoca(spec);
    checkWellFormed(spec, chi);
    int k = chi.k;
    int psi = static_cast<int>(chi.psi);
    int maxc = 1, maxd = 1;
    for (const auto& b : chi.belts) {
        maxc = std::max(maxc, b.c);
        maxd = std::max(maxd, b.d);
    }
    int mTop = chi.mBound + 2 * psi * maxd + 2;
    int nTop = chi.nBound + 2 * psi * maxc + 2;
    int top = std::max(mTop, nTop) + psi + 1;
    auto gt = buildTables(spec, top, k, std::numeric_limits<int>::max());

    auto fail = [](int m, int n, int p, int q, const std::string& why) {
        return CertificateVerdict{false, GridPoint{m, n, p, q}, why};
    };
    // colour lookup: explicit region, then belts, then background
    auto colour = [&](int m, int n, int p, int q, Background* kindOut) -> int {
        *kindOut = Background::Colour0;
        if (m <= chi.mBound && n <= chi.nBound)
            return chi.points.at({m, n, p, q});
        for (const auto& b : chi.belts) {
            int j = b.row(m, n);
            if (j >= 0 && j < b.thickness) {
                int ph = m % (psi * b.d);
                return b.pattern[j][ph][p * k + q] - '0';
            }
        }
        Background bg = gt.kind(m, n, p, q);
        *kindOut = bg;
        return bg == Background::Colour1 ? 1 : 0;
    };

    // explicit points that are background must carry the background colour
    for (const auto& [key, c] : chi.points) {
        auto [m, n, p, q] = key;
        Background bg = gt.kind(m, n, p, q);
        if (bg != Background::NotBackground && c != (bg == Background::Colour1 ? 1 : 0))
            return fail(m, n, p, q, std::string("explicit colour disagrees with background ") + backgroundName(bg));
    }

    std::string badPoint;
    GridPoint where;
    auto inR = [&](int a, int bb) {
        int sa = a % k, ca = a / k, sb = bb % k, cb = bb / k;
        Background kd;
        int c = colour(ca, cb, sa, sb, &kd);
        if (kd == Background::NotBackground && badPoint.empty()) {
            badPoint = "point lies in no belt and is not background";
            where = GridPoint{ca, cb, sa, sb};
        }
        return c == 1;
    };
    for (int m = 0; m <= mTop; ++m)
        for (int n = 0; n <= nTop; ++n)
            for (int p = 0; p < k; ++p)
                for (int q = 0; q < k; ++q) {
                    Background kd;
                    int c = colour(m, n, p, q, &kd);
                    if (kd == Background::NotBackground)
                        return fail(m, n, p, q, "point lies in no belt and is not background");
                    bool uncovered = !(m <= chi.mBound && n <= chi.nBound);
                    bool inBelt = false;
                    for (const auto& b : chi.belts) {
                        int j = b.row(m, n);
                        inBelt = inBelt || (j >= 0 && j < b.thickness);
                    }
                    if (c != 1 || (uncovered && !inBelt))
                        continue; // background colour-1 points are bisimilar outright
                    std::string why;
                    if (!locallyConsistent(gt.cs.lts.out[gt.cs.id(p, m)], gt.cs.lts.out[gt.cs.id(q, n)], inR, &why))
                        return fail(m, n, p, q, "colour 1 is not locally consistent: " + why);
                    if (!badPoint.empty())
                        return fail(where.m, where.n, where.p, where.q, badPoint);
                }

    // background periodicity beyond the explicit bounds
    for (int m = chi.mBound + 1; m + psi <= mTop; ++m)
        for (int n = chi.nBound + 1; n + psi <= nTop; ++n)
            for (int p = 0; p < k; ++p)
                for (int q = 0; q < k; ++q) {
                    Background a = gt.kind(m, n, p, q);
                    if (a == Background::NotBackground)
                        continue;
                    for (auto [dm, dn] : {std::pair{psi, 0}, std::pair{0, psi}}) {
                        Background b = gt.kind(m + dm, n + dn, p, q);
                        if (b != Background::NotBackground && b != a)
                            return fail(m, n, p, q, "background colour is not psi-periodic");
                    }
                }
    return CertificateVerdict{};
}

Colouring certificateFromGrid(const Ppda& spec, const GridResult& grid, std::vector<Belt> shapes)
{
    int k = grid.k;
    Colouring chi;
    chi.k = k;
    chi.psi = periodPsi(k);
    chi.mBound = grid.bounds.mMax;
    chi.nBound = grid.bounds.nMax;
    for (int m = 0; m <= chi.mBound; ++m)
        for (int n = 0; n <= chi.nBound; ++n)
            for (int p = 0; p < k; ++p)
                for (int q = 0; q < k; ++q)
                    chi.points[{m, n, p, q}] = grid.colour[grid.at(m, n, p, q)];
    int psi = static_cast<int>(chi.psi);
    for (auto& b : shapes) {
        b.pattern.assign(b.thickness, std::vector<std::string>(psi * b.d, std::string(k * k, '0')));
        for (int j = 0; j < b.thickness; ++j)
            for (int ph = 0; ph < psi * b.d; ++ph) {
                // largest m in the region with this phase and an integral n on row j
                for (int m = chi.mBound - ((chi.mBound - ph) % (psi * b.d) + psi * b.d) % (psi * b.d); m >= 0;
                     m -= psi * b.d) {
                    int num = b.c * m + b.offset + j;
                    if (num < 0 || num % b.d != 0)
                        continue;
                    int n = num / b.d;
                    if (n > chi.nBound)
                        continue;
                    for (int p = 0; p < k; ++p)
                        for (int q = 0; q < k; ++q)
                            b.pattern[j][ph][p * k + q] = static_cast<char>('0' + grid.colour[grid.at(m, n, p, q)]);
                    break;
                }
            }
        chi.belts.push_back(std::move(b));
    }
    (void)spec;
    return chi;
}

} // namespace ppda
