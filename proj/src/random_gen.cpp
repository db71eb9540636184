#include "ppda/random_gen.hh"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <unordered_set>

namespace ppda {

int uniformInt(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

static bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

// positive integer parts summing to den
static std::vector<long> composition(Rng& rng, int parts, long den)
{
    std::vector<long> cuts;
    std::set<long> chosen;
    while (static_cast<int>(chosen.size()) < parts - 1)
        chosen.insert(std::uniform_int_distribution<long>(1, den - 1)(rng));
    long prev = 0;
    for (long c : chosen) {
        cuts.push_back(c - prev);
        prev = c;
    }
    cuts.push_back(den - prev);
    return cuts;
}

static std::vector<Rational> randomWeights(Rng& rng, int parts)
{
    static const long dens[] = {2, 3, 4, 5, 6, 8, 10, 12};
    long den = dens[uniformInt(rng, 0, 7)];
    while (den < parts)
        den *= 2;
    std::vector<Rational> w;
    for (long c : composition(rng, parts, den))
        w.emplace_back(c, den);
    return w;
}

Distribution<int> randomDistribution(Rng& rng, int n, int support)
{
    support = std::min(support, n);
    std::vector<int> elems(n);
    std::iota(elems.begin(), elems.end(), 0);
    std::shuffle(elems.begin(), elems.end(), rng);
    auto w = randomWeights(rng, support);
    std::vector<std::pair<int, Rational>> e;
    for (int i = 0; i < support; ++i)
        e.emplace_back(elems[i], w[i]);
    return Distribution<int>(std::move(e));
}

Partition randomPartition(Rng& rng, int n, int blocks)
{
    std::vector<int> label(n);
    for (auto& l : label)
        l = uniformInt(rng, 0, std::max(0, blocks - 1));
    Partition p;
    p.block.assign(n, -1);
    std::vector<int> least(std::max(blocks, 1), -1);
    for (int s = 0; s < n; ++s) {
        if (least[label[s]] < 0)
            least[label[s]] = s;
        p.block[s] = least[label[s]];
    }
    return p;
}

static Word randomWord(Rng& rng, int symbols, int len)
{
    Word w(len);
    for (auto& x : w)
        x = uniformInt(rng, 0, symbols - 1);
    return w;
}

static std::vector<std::pair<Target, Rational>> randomAlts(Rng& rng, int states, int symbols, int support,
                                                           auto&& pushLen)
{
    std::set<Target> ts;
    int tries = 0;
    while (static_cast<int>(ts.size()) < support && tries++ < 50)
        ts.insert(Target{uniformInt(rng, 0, states - 1), randomWord(rng, symbols, pushLen())});
    auto w = randomWeights(rng, static_cast<int>(ts.size()));
    std::vector<std::pair<Target, Rational>> alts;
    int i = 0;
    for (const auto& t : ts)
        alts.emplace_back(t, w[i++]);
    return alts;
}

Ppda randomPpda(Rng& rng, const RandomPpdaParams& p)
{
    Ppda d;
    int nq = uniformInt(rng, 1, p.maxStates), ng = uniformInt(rng, 1, p.maxSymbols),
        na = uniformInt(rng, 1, p.maxActions);
    for (int i = 0; i < nq; ++i)
        d.addState("s" + std::to_string(i));
    for (int i = 0; i < ng; ++i)
        d.addSymbol(std::string(1, static_cast<char>('A' + i)));
    for (int i = 0; i < na; ++i)
        d.addAction(std::string(1, static_cast<char>('a' + i)));
    for (int q = 0; q < nq; ++q)
        for (int x = 0; x < ng; ++x)
            for (int a = 0; a < na; ++a) {
                if (!coin(rng, p.ruleProbability))
                    continue;
                int copies = p.diracOnly ? uniformInt(rng, 1, 2) : 1;
                for (int c = 0; c < copies; ++c) {
                    int sup = p.diracOnly ? 1 : uniformInt(rng, 1, p.maxSupport);
                    d.addRule(q, x, a, randomAlts(rng, nq, ng, sup, [&] { return uniformInt(rng, 0, p.maxPush); }));
                }
            }
    return d;
}

Ppda randomPoca(Rng& rng, int k, int maxSupport, double ruleProbability)
{
    Ppda d;
    for (int i = 0; i < k; ++i)
        d.addState("s" + std::to_string(i));
    int X = d.addSymbol("X"), Z = d.addSymbol("Z");
    int na = uniformInt(rng, 1, 2);
    for (int i = 0; i < na; ++i)
        d.addAction(std::string(1, static_cast<char>('a' + i)));
    for (int q = 0; q < k; ++q)
        for (int a = 0; a < na; ++a)
            for (int top : {X, Z}) {
                if (!coin(rng, ruleProbability))
                    continue;
                std::set<Target> ts;
                int sup = uniformInt(rng, 1, maxSupport);
                for (int t = 0; t < 20 && static_cast<int>(ts.size()) < sup; ++t) {
                    int s = uniformInt(rng, 0, k - 1);
                    Word w;
                    if (top == X) {
                        int len = uniformInt(rng, 0, 2);
                        w.assign(len, X);
                    } else {
                        w = coin(rng, 0.5) ? Word{Z} : Word{X, Z};
                    }
                    ts.insert(Target{s, w});
                }
                auto wts = randomWeights(rng, static_cast<int>(ts.size()));
                std::vector<std::pair<Target, Rational>> alts;
                int i = 0;
                for (const auto& t : ts)
                    alts.emplace_back(t, wts[i++]);
                d.addRule(q, top, a, std::move(alts));
            }
    return d;
}

Ppda randomPvpda(Rng& rng, int maxStates, int maxSymbols, int maxSupport, bool diracOnly, double ruleProbability)
{
    Ppda d;
    int nq = uniformInt(rng, 1, maxStates), ng = uniformInt(rng, 1, maxSymbols);
    for (int i = 0; i < nq; ++i)
        d.addState("s" + std::to_string(i));
    for (int i = 0; i < ng; ++i)
        d.addSymbol(std::string(1, static_cast<char>('A' + i)));
    d.addAction("a_r", ActionClass::Return);
    d.addAction("a_int", ActionClass::Internal);
    d.addAction("a_c", ActionClass::Call);
    for (int q = 0; q < nq; ++q)
        for (int x = 0; x < ng; ++x)
            for (int a = 0; a < 3; ++a) {
                if (!coin(rng, ruleProbability))
                    continue;
                int len = pushLengthOf((*d.visibility)[a]);
                int copies = diracOnly ? uniformInt(rng, 1, 2) : 1;
                for (int c = 0; c < copies; ++c) {
                    int sup = diracOnly ? 1 : uniformInt(rng, 1, maxSupport);
                    d.addRule(q, x, a, randomAlts(rng, nq, ng, sup, [&] { return len; }));
                }
            }
    return d;
}

Configuration randomConfiguration(Rng& rng, const Ppda& spec, int minLen, int maxLen)
{
    Configuration c;
    c.state = uniformInt(rng, 0, static_cast<int>(spec.states.size()) - 1);
    c.stack = randomWord(rng, static_cast<int>(spec.stack.size()), uniformInt(rng, minLen, maxLen));
    return c;
}

PushdownGame randomGame(Rng& rng, int maxStates, int maxSymbols)
{
    PushdownGame g;
    Ppda& d = g.spec;
    int nq = uniformInt(rng, 2, maxStates), ng = uniformInt(rng, 1, maxSymbols);
    for (int i = 0; i < nq; ++i)
        d.addState("g" + std::to_string(i));
    for (int i = 0; i < ng; ++i)
        d.addSymbol(std::string(1, static_cast<char>('A' + i)));
    int a = d.addAction("a");
    for (int p = 0; p < nq; ++p)
        g.owner.push_back(uniformInt(rng, 0, 1));
    for (int p = 0; p < nq; ++p)
        for (int x = 0; x < ng; ++x) {
            int kind = uniformInt(rng, 0, 5);
            if (kind == 0)
                continue; // dead head
            if (kind <= 2) {
                int len = uniformInt(rng, 0, 2);
                d.addRule(p, x, a, {{Target{uniformInt(rng, 0, nq - 1), randomWord(rng, ng, len)}, Rational(1)}});
            } else {
                std::set<Target> ts;
                while (ts.size() < 2)
                    ts.insert(Target{uniformInt(rng, 0, nq - 1), randomWord(rng, ng, 1)});
                for (const auto& t : ts)
                    d.addRule(p, x, a, {{t, Rational(1)}});
            }
        }
    g.p0 = 0;
    g.x0 = 0;
    return g;
}

bool gameSuitable(const PushdownGame& g, std::size_t cap)
{
    HeadIndex idx(g.spec);
    std::unordered_set<Configuration, ConfigurationHash> seen;
    std::deque<Configuration> work;
    Configuration start{g.p0, {g.x0}};
    seen.insert(start);
    work.push_back(start);
    while (!work.empty()) {
        Configuration c = work.front();
        work.pop_front();
        if (c.stack.empty())
            return false;
        for (int ri : idx.rules(c.state, c.stack[0])) {
            const Target& t = g.spec.rules[ri].dist.entries().front().first;
            Configuration n{t.state, t.push};
            n.stack.insert(n.stack.end(), c.stack.begin() + 1, c.stack.end());
            if (seen.insert(n).second) {
                if (seen.size() > cap)
                    return false;
                work.push_back(n);
            }
        }
    }
    return true;
}

} // namespace ppda
