#include "ppda/semantics.hh"

#include "ppda/error.hh"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

namespace ppda {

std::vector<Step> successors(const Ppda& spec, const HeadIndex& idx, const Configuration& c)
{
    std::vector<Step> out;
    if (c.stack.empty())
        return out;
    int top = c.stack.front();
    for (int ri : idx.rules(c.state, top)) {
        const Rule& r = spec.rules[ri];
        std::vector<std::pair<Configuration, Rational>> d;
        d.reserve(r.dist.size());
        for (const auto& [t, w] : r.dist.entries()) {
            Configuration nc;
            nc.state = t.state;
            nc.stack.reserve(t.push.size() + c.stack.size() - 1);
            nc.stack.insert(nc.stack.end(), t.push.begin(), t.push.end());
            nc.stack.insert(nc.stack.end(), c.stack.begin() + 1, c.stack.end());
            d.emplace_back(std::move(nc), w);
        }
        out.push_back(Step{r.action, Distribution<Configuration>(std::move(d))});
    }
    return out;
}

int Partition::blockCount() const
{
    int n = 0;
    for (std::size_t s = 0; s < block.size(); ++s)
        if (block[s] == static_cast<int>(s))
            ++n;
    return n;
}

std::vector<std::vector<int>> Partition::blocks() const
{
    std::map<int, std::vector<int>> m;
    for (std::size_t s = 0; s < block.size(); ++s)
        if (block[s] >= 0)
            m[block[s]].push_back(static_cast<int>(s));
    std::vector<std::vector<int>> out;
    for (auto& [b, v] : m)
        out.push_back(std::move(v));
    return out;
}

int Ball::indexOf(const Configuration& c) const
{
    auto it = std::find(configs.begin(), configs.end(), c);
    return it == configs.end() ? -1 : static_cast<int>(it - configs.begin());
}

namespace {

struct Explorer {
    const Ppda& spec;
    HeadIndex idx;
    std::size_t cap;
    Ball ball;
    std::unordered_map<Configuration, int, ConfigurationHash> seen;
    std::deque<int> queue;

    Explorer(const Ppda& s, std::size_t c) : spec(s), idx(s), cap(c)
    {
        ball.lts.actions = spec.actions;
    }

    int intern(const Configuration& c, int depth)
    {
        auto it = seen.find(c);
        if (it != seen.end())
            return it->second;
        if (ball.configs.size() >= cap)
            throw Error(ErrorCode::BudgetExceeded,
                        "explored more than " + std::to_string(cap) + " configurations");
        int id = ball.lts.addState(renderConfiguration(spec, c));
        ball.configs.push_back(c);
        ball.depth.push_back(depth);
        seen.emplace(c, id);
        queue.push_back(id);
        return id;
    }

    // expand states of depth < limit (limit < 0: no limit)
    void run(int limit)
    {
        while (!queue.empty()) {
            int s = queue.front();
            queue.pop_front();
            int d = ball.depth[s];
            if (limit >= 0 && d >= limit)
                continue;
            Configuration c = ball.configs[s];
            for (auto& st : successors(spec, idx, c)) {
                std::vector<std::pair<int, Rational>> d2;
                for (const auto& [nc, w] : st.dist.entries())
                    d2.emplace_back(intern(nc, d + 1), w);
                ball.lts.addMove(s, st.action, std::move(d2));
            }
        }
    }
};

} // namespace

Ball unfold(const Ppda& spec, const Configuration& c1, const Configuration& c2, int n, std::size_t cap)
{
    if (n < 0)
        throw Error(ErrorCode::Shape, "negative radius");
    Explorer ex(spec, cap);
    ex.ball.center1 = ex.intern(c1, 0);
    ex.ball.center2 = ex.intern(c2, 0);
    ex.ball.radius = n;
    ex.run(n);
    return std::move(ex.ball);
}

Ball unfoldClosed(const Ppda& spec, const std::vector<Configuration>& roots, std::size_t cap)
{
    Explorer ex(spec, cap);
    for (const auto& r : roots)
        ex.intern(r, 0);
    if (!roots.empty()) {
        ex.ball.center1 = 0;
        ex.ball.center2 = ex.seen.at(roots.size() > 1 ? roots[1] : roots[0]);
    }
    ex.run(-1);
    ex.ball.closed = true;
    ex.ball.radius = -1;
    return std::move(ex.ball);
}

namespace {

using Lifted = std::vector<std::pair<int, Rational>>;
using Signature = std::pair<int, std::vector<std::pair<int, Lifted>>>;

Lifted liftTo(const Distribution<int>& d, const Partition& p)
{
    std::map<int, Rational> m;
    for (const auto& [t, w] : d.entries()) {
        if (!p.has(t))
            throw Error(ErrorCode::Frontier, "successor state " + std::to_string(t) + " has no verdict");
        m[p.block[t]] += w;
    }
    return Lifted(m.begin(), m.end());
}

} // namespace

Partition refineOnce(const Plts& lts, const Partition& prev, const std::vector<char>& eligible)
{
    Partition next;
    next.block.assign(lts.size(), -1);
    std::map<Signature, int> ids;
    for (int s = 0; s < lts.size(); ++s) {
        if (!eligible[s])
            continue;
        if (!prev.has(s))
            throw Error(ErrorCode::Frontier, "state " + std::to_string(s) + " lacks a previous verdict");
        Signature sig;
        sig.first = prev.block[s];
        for (const auto& m : lts.out[s])
            sig.second.emplace_back(m.action, liftTo(m.dist, prev));
        std::sort(sig.second.begin(), sig.second.end());
        sig.second.erase(std::unique(sig.second.begin(), sig.second.end()), sig.second.end());
        auto [it, fresh] = ids.emplace(std::move(sig), s);
        next.block[s] = it->second;
    }
    return next;
}

static Partition totalRelation(const std::vector<char>& eligible)
{
    Partition p;
    p.block.assign(eligible.size(), -1);
    int first = -1;
    for (std::size_t s = 0; s < eligible.size(); ++s)
        if (eligible[s]) {
            if (first < 0)
                first = static_cast<int>(s);
            p.block[s] = first;
        }
    return p;
}

std::vector<Partition> refineLevels(const Plts& lts, const std::vector<int>& budget, int n)
{
    std::vector<Partition> levels;
    std::vector<char> el(lts.size());
    for (int s = 0; s < lts.size(); ++s)
        el[s] = budget[s] >= 0;
    levels.push_back(totalRelation(el));
    for (int k = 1; k <= n; ++k) {
        for (int s = 0; s < lts.size(); ++s)
            el[s] = budget[s] >= k;
        levels.push_back(refineOnce(lts, levels.back(), el));
    }
    return levels;
}

StableResult stablePartition(const Plts& lts)
{
    std::vector<char> el(lts.size(), 1);
    StableResult r;
    r.partition = totalRelation(el);
    int count = r.partition.blockCount();
    for (;;) {
        Partition next = refineOnce(lts, r.partition, el);
        int c = next.blockCount();
        if (c == count)
            return r;
        r.partition = std::move(next);
        count = c;
        ++r.rounds;
    }
}

std::string DepthVerdict::str() const
{
    return (equivalent ? "EQUIVALENT_AT(" : "DISTINGUISHED_AT(") + std::to_string(depth) + ")";
}

DepthVerdict bisimDepthOnBall(const Ball& ball, int n)
{
    if (!ball.closed && ball.radius < n)
        throw Error(ErrorCode::Shape, "ball radius smaller than the requested depth");
    int sz = ball.lts.size();
    std::vector<char> el(sz);
    for (int s = 0; s < sz; ++s)
        el[s] = 1;
    Partition cur = totalRelation(el);
    for (int k = 1; k <= n; ++k) {
        for (int s = 0; s < sz; ++s)
            el[s] = ball.closed || ball.depth[s] <= n - k;
        cur = refineOnce(ball.lts, cur, el);
        if (!cur.same(ball.center1, ball.center2))
            return DepthVerdict{false, k};
    }
    return DepthVerdict{true, n};
}

DepthVerdict bisimDepth(const Ppda& spec, const Configuration& c1, const Configuration& c2, int n, std::size_t cap)
{
    if (c1 == c2)
        return DepthVerdict{true, n};
    Ball b = unfold(spec, c1, c2, n, cap);
    return bisimDepthOnBall(b, n);
}

Partition bisimClasses(const Ppda& spec, const Ball& ball, int n)
{
    (void)spec;
    if (!ball.closed && ball.radius < n)
        throw Error(ErrorCode::Shape, "ball radius smaller than the requested depth");
    std::vector<int> budget(ball.lts.size());
    for (int s = 0; s < ball.lts.size(); ++s)
        budget[s] = ball.closed ? n : ball.radius - ball.depth[s];
    return refineLevels(ball.lts, budget, n).back();
}

static std::map<int, Rational> blockMass(const Distribution<int>& d, const Partition& R)
{
    std::map<int, Rational> m;
    for (const auto& [s, w] : d.entries()) {
        if (!R.has(s))
            throw Error(ErrorCode::UnknownState, "state " + std::to_string(s) + " outside the partition");
        m[R.block[s]] += w;
    }
    return m;
}

bool rEquivalent(const Distribution<int>& d, const Distribution<int>& e, const Partition& R)
{
    return blockMass(d, R) == blockMass(e, R);
}

bool lemma1Check(const Distribution<int>& d, const Distribution<int>& e, const Partition& R)
{
    std::vector<int> u = d.support();
    for (int s : e.support())
        if (std::find(u.begin(), u.end(), s) == u.end())
            u.push_back(s);
    for (int s : u)
        if (!R.has(s))
            throw Error(ErrorCode::UnknownState, "state " + std::to_string(s) + " outside the partition");
    if (u.size() > 20)
        throw Error(ErrorCode::SupportTooLarge, "subset enumeration over more than 20 states");
    auto closureMass = [&](const Distribution<int>& f, const std::vector<int>& blocks) {
        Rational m;
        for (const auto& [s, w] : f.entries())
            if (std::find(blocks.begin(), blocks.end(), R.block[s]) != blocks.end())
                m += w;
        return m;
    };
    auto setMass = [&](const Distribution<int>& f, unsigned long mask) {
        Rational m;
        for (std::size_t i = 0; i < u.size(); ++i)
            if (mask >> i & 1UL)
                m += f(u[i]);
        return m;
    };
    for (unsigned long mask = 0; mask < (1UL << u.size()); ++mask) {
        std::vector<int> blocks;
        for (std::size_t i = 0; i < u.size(); ++i)
            if (mask >> i & 1UL)
                blocks.push_back(R.block[u[i]]);
        if (setMass(d, mask) > closureMass(e, blocks) || setMass(e, mask) > closureMass(d, blocks))
            return false;
    }
    return true;
}

std::string dumpBall(const Ppda& spec, const Ball& ball, const Partition& p)
{
    std::ostringstream os;
    os << "# states " << ball.lts.size() << " radius " << (ball.closed ? std::string("closed") : std::to_string(ball.radius))
       << " blocks " << p.blockCount() << "\n";
    for (int s = 0; s < ball.lts.size(); ++s) {
        os << s << " " << renderConfiguration(spec, ball.configs[s]) << " depth=" << ball.depth[s] << " block=";
        if (p.has(s))
            os << p.block[s];
        else
            os << "-";
        for (const auto& m : ball.lts.out[s]) {
            os << " ; " << ball.lts.actions[m.action] << " ->";
            bool first = true;
            for (const auto& [t, w] : m.dist.entries()) {
                os << (first ? " " : " | ") << w << " " << t;
                first = false;
            }
        }
        os << "\n";
    }
    return os.str();
}

std::string dotBall(const Ppda& spec, const Ball& ball)
{
    std::ostringstream os;
    os << "digraph ball {\n";
    for (int s = 0; s < ball.lts.size(); ++s)
        os << "  n" << s << " [label=\"" << renderConfiguration(spec, ball.configs[s]) << "\"];\n";
    int aux = 0;
    for (int s = 0; s < ball.lts.size(); ++s)
        for (const auto& m : ball.lts.out[s]) {
            if (m.dist.isDirac()) {
                os << "  n" << s << " -> n" << m.dist.entries()[0].first << " [label=\"" << ball.lts.actions[m.action]
                   << "\"];\n";
                continue;
            }
            os << "  d" << aux << " [shape=point];\n";
            os << "  n" << s << " -> d" << aux << " [label=\"" << ball.lts.actions[m.action] << "\"];\n";
            for (const auto& [t, w] : m.dist.entries())
                os << "  d" << aux << " -> n" << t << " [label=\"" << w << "\"];\n";
            ++aux;
        }
    os << "}\n";
    return os.str();
}

} // namespace ppda
