#include "common.hh"
#include "oracles.hh"

#include "ppda/error.hh"
#include "ppda/random_gen.hh"
#include "ppda/reduction.hh"
#include "ppda/semantics.hh"

#include <doctest.h>

#include <set>

using namespace ppda;

namespace {

std::set<std::string> actionNames(const Ppda& spec, const std::vector<oracle::Succ>& s)
{
    std::set<std::string> out;
    for (const auto& m : s)
        out.insert(spec.actions[m.action]);
    return out;
}

std::set<std::string> targets(const Ppda& spec, const std::vector<oracle::Succ>& s)
{
    std::set<std::string> out;
    for (const auto& m : s)
        for (const auto& [c, p] : m.dist)
            out.insert(renderConfiguration(spec, c));
    return out;
}

} // namespace

TEST_CASE("weights are exactly the nonempty subset sums")
{
    Ppda spec = example1();
    auto W = computeWeights(spec);
    std::set<Rational> want;
    for (const auto& r : spec.rules)
        for (const auto& w : oracle::subsetSums(r.dist))
            want.insert(w);
    CHECK(std::set<Rational>(W.weights.begin(), W.weights.end()) == want);
    CHECK(std::is_sorted(W.weights.begin(), W.weights.end()));
    // the rX rule alone
    Ppda rx = loadPpda("states: r\nstack: X X' Y\nactions: a\nr X a -> 0.3 r Y X | 0.2 r Y X' | 0.5 r .\n");
    auto Wr = computeWeights(rx);
    std::vector<Rational> expect{Rational(1, 5), Rational(3, 10), Rational(1, 2), Rational(7, 10), Rational(4, 5),
                                 Rational(1)};
    CHECK(Wr.weights == expect);
    for (const auto& w : Wr.weights)
        CHECK(!w.isZero());
}

TEST_CASE("Dirac-only automata have the single weight 1")
{
    Ppda spec = loadPpda("states: p q\nstack: X\nactions: a b\np X a -> 1 q X\nq X b -> 1 p .\n");
    CHECK(computeWeights(spec).weights == std::vector<Rational>{Rational(1)});
}

TEST_CASE("weight labels leaving r<d> include the tenths up to the rule mass")
{
    Ppda spec = example1();
    auto red = buildReduced(spec);
    auto after = oracle::successors(red.spec, cfg(spec, "rX"));
    REQUIRE(after.size() == 1);
    auto labels = actionNames(red.spec, oracle::successors(red.spec, after[0].dist[0].first));
    for (const char* w : {"1/2", "7/10", "4/5", "1"})
        CHECK(labels.count(w) == 1);
}

TEST_CASE("reduced successors of pXZ follow the pick-and-match structure")
{
    Ppda spec = example1();
    auto red = buildReduced(spec);
    const Ppda& d = red.spec;
    auto s1 = oracle::successors(d, cfg(spec, "pXZ"));
    REQUIRE(s1.size() == 1);
    CHECK(d.actions[s1[0].action] == "a");
    REQUIRE(s1[0].dist.size() == 1);
    CHECK(s1[0].dist[0].second == Rational(1));
    Configuration mid = s1[0].dist[0].first;
    CHECK(red.isNewSymbol(mid.stack[0]));
    auto s2 = oracle::successors(d, mid);
    std::set<std::string> subsets = targets(d, s2);
    CHECK(subsets == std::set<std::string>{"p<d0:1>Z", "p<d0:2>Z", "p<d0:3>Z"});
    // <{qXX}> and <{p}> carry mass 1/2, so weights 1/10..1/2 reach them; the full set takes up to 1
    for (const auto& m : s2) {
        Rational w = Rational::parse(d.actions[m.action]);
        std::string t = renderConfiguration(d, m.dist[0].first);
        if (t != "p<d0:3>Z")
            CHECK(w <= Rational(1, 2));
    }
    std::set<std::string> finals;
    for (const auto& m : s2)
        for (const auto& h : oracle::successors(d, m.dist[0].first)) {
            CHECK(d.actions[h.action] == "#");
            finals.insert(renderConfiguration(d, h.dist[0].first));
        }
    CHECK(finals == std::set<std::string>{"qXXZ", "pZ"});
}

TEST_CASE("one Dirac rule reduces to exactly three rules")
{
    Ppda spec = loadPpda("states: p q\nstack: X Y\nactions: a\np X a -> 1 q Y\n");
    auto red = buildReduced(spec);
    REQUIRE(red.spec.rules.size() == 3);
    CHECK(renderPpda(red.spec).find("p X a -> 1 p <d0>") != std::string::npos);
    CHECK(renderPpda(red.spec).find("p <d0> 1 -> 1 p <d0:1>") != std::string::npos);
    CHECK(renderPpda(red.spec).find("p <d0:1> # -> 1 q Y") != std::string::npos);
}

TEST_CASE("a pBPA reduces to a BPA")
{
    Ppda spec = loadPpdaFile(dataPath("example1_pbpa.ppda"));
    auto red = buildReduced(spec);
    auto c = classify(red.spec);
    CHECK(c.pBPA);
    CHECK(c.diracOnly);
}

TEST_CASE("support cap")
{
    Ppda spec = loadPpda("states: p\nstack: A B C\nactions: a\np A a -> 1/3 p A | 1/3 p B | 1/3 p C\n");
    CHECK_NOTHROW(buildReduced(spec, 3));
    try {
        buildReduced(spec, 2);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SupportTooLarge);
    }
}

TEST_CASE("size bounds hold on random automata")
{
    Rng rng(404);
    for (int i = 0; i < 200; ++i) {
        Ppda spec = randomPpda(rng, {});
        auto red = buildReduced(spec);
        auto s = sizeStats(spec, red);
        std::vector<std::string> why;
        CHECK_MESSAGE(s.withinBounds(&why), renderPpda(spec));
        std::size_t pow = std::size_t(1) << s.m;
        CHECK(s.gammaPrime <= s.gamma + s.rho + s.rho * pow);
        CHECK(s.sigmaPrime <= s.sigma + s.w + 1);
        CHECK(s.rulesUnderHash <= s.rho * pow * s.m);
        CHECK(s.gammaPrime == red.spec.stack.size());
        CHECK(s.sigmaPrime == red.spec.actions.size());
        CHECK(isDiracOnly(red.spec));
    }
}

TEST_CASE("reduction step structure")
{
    Rng rng(5150);
    for (int i = 0; i < 80; ++i) {
        Ppda spec = randomPpda(rng, {});
        auto red = buildReduced(spec);
        const Ppda& d = red.spec;
        // conservativity: rules on source heads only start a-steps into <d>
        for (const auto& r : d.rules) {
            const Target& t = r.dist.entries()[0].first;
            if (!red.isNewSymbol(r.symbol)) {
                CHECK(r.action < red.baseActions);
                REQUIRE(t.push.size() == 1);
                CHECK(red.origin[t.push[0] - red.baseSymbols].mask == 0);
            } else {
                CHECK(r.action >= red.baseActions);
            }
        }
        // step tripling from a source configuration
        auto start = randomConfiguration(rng, spec, 1, 2);
        std::vector<Configuration> layer{start};
        for (int step = 1; step <= 6 && !layer.empty(); ++step) {
            std::vector<Configuration> next;
            for (const auto& c : layer)
                for (const auto& m : oracle::successors(d, c))
                    next.push_back(m.dist[0].first);
            for (const auto& c : next) {
                bool top = !c.stack.empty() && red.isNewSymbol(c.stack[0]);
                CHECK(top == (step % 3 != 0));
                for (std::size_t j = 1; j < c.stack.size(); ++j)
                    CHECK(!red.isNewSymbol(c.stack[j]));
            }
            if (next.size() > 400)
                next.resize(400);
            layer = next;
        }
        // monotone weight availability
        std::set<std::tuple<int, int, int>> edges; // (state, symbol, target symbol) per weight
        for (const auto& r : d.rules)
            if (red.isNewSymbol(r.symbol) && !red.isHash(r.action)) {
                Rational w = Rational::parse(d.actions[r.action]);
                for (const auto& w2 : red.weights.weights)
                    if (w2 <= w) {
                        bool found = false;
                        for (const auto& o : d.rules)
                            if (o.state == r.state && o.symbol == r.symbol && d.actions[o.action] == w2.str() &&
                                o.dist.entries()[0].first == r.dist.entries()[0].first)
                                found = true;
                        CHECK(found);
                    }
            }
    }
}

TEST_CASE("visibly reduction of a call rule")
{
    Ppda spec = loadPpda("states: p q\nstack: X Y Z'\nactions: a_c\nvisibility: c=a_c\np X a_c -> 1 q Y Z'\n");
    auto red = buildReducedVisibly(spec);
    const Ppda& d = red.spec;
    auto s1 = oracle::successors(d, cfg(spec, "pX"));
    REQUIRE(s1.size() == 1);
    CHECK((*d.visibility)[s1[0].action] == ActionClass::Internal);
    auto s2 = oracle::successors(d, s1[0].dist[0].first);
    REQUIRE(s2.size() == 1);
    CHECK((*d.visibility)[s2[0].action] == ActionClass::Internal);
    auto s3 = oracle::successors(d, s2[0].dist[0].first);
    REQUIRE(s3.size() == 1);
    CHECK(d.actions[s3[0].action] == "#c");
    CHECK((*d.visibility)[s3[0].action] == ActionClass::Call);
    CHECK(renderConfiguration(d, s3[0].dist[0].first) == "qYZ'");
    CHECK(classify(d).pvPDA);
}

TEST_CASE("visibly reduction of an automaton without rules")
{
    Ppda spec = loadPpda("states: p\nstack: X\nactions: a_r\nvisibility: r=a_r\n");
    CHECK(buildReducedVisibly(spec).spec.rules.empty());
    Ppda plain = loadPpda("states: p\nstack: X\nactions: a\np X a -> 1 p X X\n");
    CHECK_THROWS_AS(buildReducedVisibly(plain), Error);
}

TEST_CASE("visibly reductions of random pvPDA are vPDA")
{
    Rng rng(61);
    for (int i = 0; i < 100; ++i) {
        Ppda spec = randomPvpda(rng, 3, 3, 3, false);
        auto c = classify(buildReducedVisibly(spec).spec);
        CHECK(c.pvPDA);
        CHECK(c.diracOnly);
    }
}

TEST_CASE("cross-validation on the example")
{
    Ppda spec = example1();
    CHECK(crossValidate(spec, cfg(spec, "pXZ"), cfg(spec, "rX"), 3));
    CHECK(crossValidate(spec, cfg(spec, "pXZ"), cfg(spec, "qXZ"), 0));
    CHECK(crossValidate(spec, cfg(spec, "pXZ"), cfg(spec, "qXZ"), 3));
}

TEST_CASE("the tripled approximant agrees with the source approximant")
{
    Rng rng(73);
    int distinguished = 0;
    for (int i = 0; i < 120; ++i) {
        Ppda spec = randomPpda(rng, {});
        auto red = buildReduced(spec);
        auto c1 = randomConfiguration(rng, spec, 1, 2), c2 = randomConfiguration(rng, spec, 1, 2);
        int n = uniformInt(rng, 0, 3);
        oracle::ConfigBisim src(spec), dst(red.spec);
        bool a = src.eq(c1, c2, n), b = dst.eq(c1, c2, 3 * n);
        CHECK(a == b);
        CHECK(crossValidate(spec, red, c1, c2, n));
        distinguished += !a;
    }
    CHECK(distinguished > 0);
}
