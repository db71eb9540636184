#include "common.hh"
#include "oracles.hh"

#include "ppda/error.hh"
#include "ppda/gadgets.hh"
#include "ppda/oca.hh"
#include "ppda/random_gen.hh"

#include <doctest.h>

#include <functional>
#include <set>

using namespace ppda;

namespace {

Ppda examplePoca() { return loadPpdaFile(dataPath("example1_poca.ppda")); }

std::set<std::string> rendered(const Ppda& spec, const std::vector<Configuration>& cs)
{
    std::set<std::string> out;
    for (const auto& c : cs)
        out.insert(renderConfiguration(spec, c));
    return out;
}

const char* kMirror = "states: p q\nstack: X Z\nactions: a b\n"
                      "p X a -> 1/2 q X | 1/2 p X\np Z a -> 1/2 q Z | 1/2 p Z\n"
                      "q X b -> 1 p X\nq Z b -> 1 p Z\n";

} // namespace

TEST_CASE("underlying finite system of the example")
{
    Ppda spec = examplePoca();
    Plts f = underlyingFlts(spec);
    REQUIRE(f.size() == 2);
    int p = spec.stateIndex("p"), q = spec.stateIndex("q");
    REQUIRE(f.out[p].size() == 1);
    CHECK(f.out[p][0].dist == Distribution<int>({{q, Rational(1, 2)}, {p, Rational(1, 2)}}));
    REQUIRE(f.out[q].size() == 1);
    CHECK(f.out[q][0].dist == Distribution<int>({{p, Rational(1)}}));
    Ppda noX = loadPpda("states: p\nstack: X Z\nactions: a\np Z a -> 1 p X Z\n");
    CHECK(underlyingFlts(noX).out[0].empty());
    CHECK_THROWS_AS(underlyingFlts(example1()), Error);
}

TEST_CASE("underlying distributions carry mass one")
{
    Rng rng(1);
    for (int i = 0; i < 100; ++i) {
        Ppda spec = randomPoca(rng, uniformInt(rng, 1, 4));
        Plts f = underlyingFlts(spec);
        int X = spec.symbolIndex("X");
        std::size_t xRules = 0;
        for (const auto& r : spec.rules)
            xRules += r.symbol == X;
        std::size_t moves = 0;
        for (const auto& out : f.out)
            for (const auto& m : out) {
                CHECK(m.dist.total() == Rational(1));
                ++moves;
            }
        CHECK(moves == xRules);
    }
}

TEST_CASE("INC of the example")
{
    Ppda spec = examplePoca();
    auto inc = rendered(spec, computeInc(spec));
    CHECK(inc.count("pZ") == 1);
    CHECK(inc.count("qZ") == 1);
    CHECK(inc == rendered(spec, oracle::naiveInc(spec, 2, 5)));
    CHECK(computeInc(loadPpda(kMirror)).empty());
}

TEST_CASE("INC agrees with the naive oracle and respects the counter bound")
{
    Rng rng(21);
    for (int i = 0; i < 100; ++i) {
        int k = uniformInt(rng, 1, 3);
        Ppda spec = randomPoca(rng, k);
        auto naive = oracle::naiveInc(spec, k, k + 3);
        for (const auto& c : naive)
            CHECK(static_cast<int>(c.stack.size()) - 1 < k);
        CHECK(rendered(spec, computeInc(spec)) == rendered(spec, naive));
    }
}

TEST_CASE("dist of the example against breadth-first search")
{
    Ppda spec = examplePoca();
    auto inc = computeInc(spec);
    std::set<Configuration> targets(inc.begin(), inc.end());
    int p = spec.stateIndex("p");
    for (int m = 0; m <= 20; ++m) {
        Configuration c = ocaConfig(spec, p, m);
        int bfs = oracle::bfsDist(spec, c, targets, 100);
        auto d = computeDist(spec, c, 100);
        CHECK(d.finite);
        CHECK(d.value == bfs);
        CHECK(exactDist(spec, p, m) == bfs);
        // pXZ is itself incompatible, so the pops stop one short of pZ
        CHECK(bfs == std::max(m - 1, 0));
    }
    CHECK(computeDist(spec, cfg(spec, "pZ"), 5).value == 0);
}

TEST_CASE("dist without INC is unbounded")
{
    Ppda spec = loadPpda(kMirror);
    auto d = computeDist(spec, cfg(spec, "pXXZ"), 50);
    CHECK(!d.finite);
    CHECK(d.str() == "INFINITY_UP_TO(50)");
    CHECK(!exactDist(spec, 0, 2).has_value());
}

TEST_CASE("exact dist matches breadth-first search on random pOCA")
{
    Rng rng(44);
    for (int i = 0; i < 100; ++i) {
        int k = uniformInt(rng, 1, 3);
        Ppda spec = randomPoca(rng, k);
        auto inc = computeInc(spec);
        std::set<Configuration> targets(inc.begin(), inc.end());
        for (int s = 0; s < k; ++s)
            for (int m = 0; m <= 6; ++m) {
                int bfs = oracle::bfsDist(spec, ocaConfig(spec, s, m), targets, 60);
                auto e = exactDist(spec, s, m);
                if (bfs >= 0)
                    CHECK(e == bfs);
                else
                    CHECK((!e || *e > 60));
            }
    }
}

TEST_CASE("background classification")
{
    Ppda spec = examplePoca();
    int p = spec.stateIndex("p"), q = spec.stateIndex("q");
    for (int m = 0; m <= 5; ++m)
        CHECK(classifyBackground(spec, GridPoint{m, m, p, p}, 2, 1000) == Background::NotBackground);
    CHECK(classifyBackground(spec, GridPoint{2, 4, p, p}, 2, 1000) == Background::Colour0);
    Ppda mirror = loadPpda(kMirror);
    for (int m = 0; m <= 3; ++m)
        for (int n = 0; n <= 3; ++n)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    bool eq = bisimDepth(mirror, ocaConfig(mirror, a, m), ocaConfig(mirror, b, n), 2).equivalent;
                    CHECK(classifyBackground(mirror, GridPoint{m, n, a, b}, 2, 1000) ==
                          (eq ? Background::Colour1 : Background::Colour0));
                }
}

TEST_CASE("unequal resolved dists are distinguished and infinite dists stabilise by k")
{
    Rng rng(90);
    int unequal = 0, infinite = 0;
    for (int i = 0; i < 100; ++i) {
        int k = uniformInt(rng, 1, 3);
        Ppda spec = randomPoca(rng, k);
        for (int t = 0; t < 4; ++t) {
            int a = uniformInt(rng, 0, k - 1), b = uniformInt(rng, 0, k - 1);
            int m = uniformInt(rng, 0, 4), n = uniformInt(rng, 0, 4);
            auto da = exactDist(spec, a, m), db = exactDist(spec, b, n);
            Configuration c1 = ocaConfig(spec, a, m), c2 = ocaConfig(spec, b, n);
            if (da && db && *da != *db) {
                ++unequal;
                CHECK(!bisimDepth(spec, c1, c2, 24).equivalent);
            } else if (!da && !db) {
                ++infinite;
                CHECK(bisimDepth(spec, c1, c2, k).equivalent == bisimDepth(spec, c1, c2, k + 5).equivalent);
            }
        }
    }
    CHECK(unequal > 0);
    CHECK(infinite > 0);
}

TEST_CASE("consistency of relations")
{
    Ppda spec = example1();
    Ball b = unfold(spec, cfg(spec, "pXZ"), cfg(spec, "rX"), 6);
    auto expanded = expandedStates(b);
    std::vector<std::pair<int, int>> id;
    for (int s = 0; s < b.lts.size(); ++s)
        if (expanded[s])
            id.emplace_back(s, s);
    CHECK(consistencyCheck(b.lts, expanded, id).consistent);
    // bounded classes are no bisimulation on an open ball
    Partition p = bisimClasses(spec, b, 3);
    std::vector<std::pair<int, int>> R;
    for (auto [s, t] : pairsOf(p))
        if (expanded[s] && expanded[t])
            R.emplace_back(s, t);
    CHECK(!consistencyCheck(b.lts, expanded, R).consistent);
}

TEST_CASE("the pair pXZ, qXZ is inconsistent on its own")
{
    Ppda spec = examplePoca();
    Ball b = unfold(spec, cfg(spec, "pXZ"), cfg(spec, "qXZ"), 2);
    auto res = consistencyCheck(b.lts, expandedStates(b), {{b.center1, b.center2}});
    CHECK(!res.consistent);
    CHECK(res.s == b.center1);
    CHECK(!res.reason.empty());
    std::vector<char> none(b.lts.size(), 0);
    CHECK_THROWS_AS(consistencyCheck(b.lts, none, {{b.center1, b.center2}}), Error);
}

TEST_CASE("bisimilarity on closed fragments is consistent and perturbations are not")
{
    Rng rng(123);
    int tested = 0, perturbed = 0;
    for (int i = 0; i < 400 && perturbed < 100; ++i) {
        Ppda spec = randomPpda(rng, {3, 2, 2, 3, 1, 0.6, false});
        std::vector<Configuration> roots{randomConfiguration(rng, spec, 1, 1), randomConfiguration(rng, spec, 1, 1)};
        Ball b;
        try {
            b = unfoldClosed(spec, roots, 400);
        } catch (const Error&) {
            continue;
        }
        auto expanded = expandedStates(b);
        auto st = stablePartition(b.lts);
        auto R = pairsOf(st.partition);
        CHECK(consistencyCheck(b.lts, expanded, R).consistent);
        for (auto [s, t] : R)
            CHECK(bisimDepth(spec, b.configs[s], b.configs[t], 6).equivalent);
        ++tested;
        if (st.partition.blockCount() < 2)
            continue;
        Partition bad = st.partition;
        auto blocks = st.partition.blocks();
        int x = uniformInt(rng, 0, static_cast<int>(blocks.size()) - 1);
        int y = uniformInt(rng, 0, static_cast<int>(blocks.size()) - 2);
        if (y >= x)
            ++y;
        if (uniformInt(rng, 0, 1) == 0) {
            for (int s : blocks[y])
                bad.block[s] = blocks[x][0];
        } else {
            int s = blocks[y][uniformInt(rng, 0, static_cast<int>(blocks[y].size()) - 1)];
            bad.block[s] = blocks[x][0];
        }
        CHECK(!consistencyCheck(b.lts, expanded, pairsOf(bad)).consistent);
        ++perturbed;
    }
    CHECK(tested > 0);
    CHECK(perturbed == 100);
}

TEST_CASE("bounded grid verdicts on the example")
{
    Ppda spec = examplePoca();
    auto same = decideBoundedGrid(spec, cfg(spec, "pXZ"), cfg(spec, "pXZ"));
    CHECK(same.verdict == GridVerdict::BisimilarCertified);
    auto diff = decideBoundedGrid(spec, cfg(spec, "pXZ"), cfg(spec, "qXZ"));
    REQUIRE(diff.verdict == GridVerdict::NotBisimilar);
    auto v = bisimDepth(spec, cfg(spec, "pXZ"), cfg(spec, "qXZ"), 10);
    CHECK(!v.equivalent);
    CHECK(diff.witnessDepth == v.depth);
    CHECK(gridVerdictName(same.verdict) == std::string("BISIMILAR_CERTIFIED"));
}

TEST_CASE("bounded grid verdicts follow acceptance on AFA instances")
{
    std::vector<std::string> afas = {
        "afa-states: q0\ninitial: q0\naccepting:\nq0 = q0 | q0\n",
        "afa-states: q0\ninitial: q0\naccepting: q0\nq0 = q0 & q0\n",
        "afa-states: q0 q1\ninitial: q0\naccepting: q1\nq0 = q1 | q0\nq1 = q0 & q0\n",
    };
    int decided = 0;
    for (const auto& text : afas) {
        auto afa = parseAfa(text);
        auto poca = afaToPoca(afa);
        for (int n = 0; n <= 5; ++n)
            for (std::size_t q = 0; q < afa.states.size(); ++q) {
                Configuration a = ocaConfig(poca.spec, poca.q[q], n), b = ocaConfig(poca.spec, poca.qp[q], n);
                GridBounds gb;
                gb.mMax = 10;
                gb.nMax = 10;
                auto g = decideBoundedGrid(poca.spec, a, b, gb);
                bool acc = accOracle(afa, static_cast<int>(q), n);
                if (g.verdict == GridVerdict::BisimilarCertified) {
                    CHECK(!acc);
                    ++decided;
                } else if (g.verdict == GridVerdict::NotBisimilar) {
                    CHECK(acc);
                    ++decided;
                }
            }
    }
    CHECK(decided > 0);
}

TEST_CASE("period psi")
{
    CHECK(periodPsi(1) == 1);
    CHECK(periodPsi(3) == 6);
    CHECK(periodPsi(5) == 120);
    CHECK_THROWS_AS(periodPsi(21), Error);
}

TEST_CASE("simple cycle counter effects divide psi")
{
    Rng rng(8);
    for (int i = 0; i < 50; ++i) {
        int k = uniformInt(rng, 1, 4);
        Ppda spec = randomPoca(rng, k);
        int X = spec.symbolIndex("X");
        std::vector<std::vector<std::pair<int, int>>> edges(k);
        for (const auto& r : spec.rules)
            if (r.symbol == X)
                for (const auto& [t, p] : r.dist.entries())
                    edges[r.state].emplace_back(t.state, static_cast<int>(t.push.size()) - 1);
        std::uint64_t psi = periodPsi(k);
        // all simple cycles from their least state
        std::function<void(int, int, int, std::vector<char>&)> walk = [&](int start, int s, int eff,
                                                                          std::vector<char>& on) {
            for (auto [t, e] : edges[s]) {
                if (t == start) {
                    int total = eff + e;
                    CHECK(std::abs(total) <= k);
                    if (total != 0)
                        CHECK(psi % static_cast<std::uint64_t>(std::abs(total)) == 0);
                } else if (t > start && !on[t]) {
                    on[t] = 1;
                    walk(start, t, eff + e, on);
                    on[t] = 0;
                }
            }
        };
        for (int s = 0; s < k; ++s) {
            std::vector<char> on(k, 0);
            on[s] = 1;
            walk(s, s, 0, on);
        }
    }
}

TEST_CASE("identity certificate on a one-state pOCA")
{
    Ppda spec = loadPpda("states: p\nstack: X Z\nactions: a\np X a -> 1 p .\np Z a -> 1 p Z\n");
    std::string text = "certificate\nk 1\npsi 1\nbounds 2 2\n";
    for (int m = 0; m <= 2; ++m)
        for (int n = 0; n <= 2; ++n)
            text += "point " + std::to_string(m) + " " + std::to_string(n) + " p p 1\n";
    text += "belt 1 1 0 1\nrow 0 0 1\nend\n";
    Colouring chi = parseCertificate(spec, text);
    CHECK(verifyPeriodicCertificate(spec, chi).accepted);
    CHECK(renderCertificate(spec, parseCertificate(spec, renderCertificate(spec, chi))) ==
          renderCertificate(spec, chi));
}

TEST_CASE("certificate derived from the grid is accepted and a flipped colour is rejected there")
{
    Ppda spec = examplePoca();
    auto g = decideBoundedGrid(spec, cfg(spec, "pXZ"), cfg(spec, "pXZ"));
    Belt diag;
    diag.c = 1;
    diag.d = 1;
    diag.offset = -2;
    diag.thickness = 5;
    Colouring chi = certificateFromGrid(spec, g, {diag});
    auto ok = verifyPeriodicCertificate(spec, chi);
    CHECK_MESSAGE(ok.accepted, ok.reason);
    int p = spec.stateIndex("p"), q = spec.stateIndex("q");
    auto key = std::make_tuple(1, 1, p, q);
    REQUIRE(chi.points.count(key) == 1);
    REQUIRE(chi.points[key] == 0);
    chi.points[key] = 1;
    auto bad = verifyPeriodicCertificate(spec, chi);
    CHECK(!bad.accepted);
    CHECK(bad.point.m == 1);
    CHECK(bad.point.n == 1);
    CHECK(bad.point.p == p);
    CHECK(bad.point.q == q);
}

TEST_CASE("malformed certificates")
{
    Ppda spec = examplePoca();
    for (const char* text : {"k 2\nend\n", "certificate\nk x\nend\n", "certificate\npoint 0 0 p s 1\nend\n",
                             "certificate\nrow 0 0 1\nend\n", "certificate\nk 2\n", "certificate\npoint 0 0 p p 2\nend\n"}) {
        try {
            verifyPeriodicCertificate(spec, parseCertificate(spec, text));
            CHECK_MESSAGE(false, text);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::MalformedCertificate);
        }
    }
}
