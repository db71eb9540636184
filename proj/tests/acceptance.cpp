// acceptance -- one PASS/FAIL line per acceptance criterion
#include "oracles.hh"

#include "ppda/cli.hh"
#include "ppda/error.hh"
#include "ppda/gadgets.hh"
#include "ppda/oca.hh"
#include "ppda/random_gen.hh"
#include "ppda/reduction.hh"
#include "ppda/semantics.hh"
#include "ppda/text_format.hh"
#include "ppda/vpda.hh"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace ppda;

namespace {

std::string dataPath(const std::string& name) { return std::string(PPDA_DATA_DIR) + "/" + name; }

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double limitSeconds; // 0 when unlimited
    std::function<Outcome()> run;
};

Outcome fail(const std::string& why) { return {false, why}; }

// 1: example pair at depth 12 and the depth-6 classes
Outcome exampleReproduction()
{
    std::ostringstream out, err;
    std::string file = dataPath("example1.ppda");
    int code = runCli({"check", file, "pXZ", "rX", "--depth", "12"}, out, err);
    if (code != 0 || out.str().rfind("EQUIVALENT_AT(12)", 0) != 0)
        return fail("check printed: " + out.str().substr(0, out.str().find('\n')));
    Ppda spec = loadPpdaFile(file);
    Ball b = unfold(spec, parseConfiguration(spec, "pXZ"), parseConfiguration(spec, "rX"), 12);
    Partition p = bisimClasses(spec, b, 6);
    int X = spec.symbolIndex("X"), Xp = spec.symbolIndex("X'"), Y = spec.symbolIndex("Y"), Z = spec.symbolIndex("Z");
    int P = spec.stateIndex("p"), Q = spec.stateIndex("q"), R = spec.stateIndex("r");
    auto allOf = [](const Word& w, std::size_t from, std::size_t to, std::initializer_list<int> ok) {
        for (std::size_t i = from; i < to; ++i)
            if (std::find(ok.begin(), ok.end(), w[i]) == ok.end())
                return false;
        return true;
    };
    // (k, 0): pX^kZ and rw with |w| = k; (k, 1): qX^{k+1}Z and rYw with |w| = k
    auto label = [&](const Configuration& c) -> std::pair<int, int> {
        const Word& w = c.stack;
        int n = static_cast<int>(w.size());
        if (c.state == P && n >= 1 && w.back() == Z && allOf(w, 0, n - 1, {X}))
            return {n - 1, 0};
        if (c.state == Q && n >= 2 && w.back() == Z && allOf(w, 0, n - 1, {X}))
            return {n - 2, 1};
        if (c.state == R && n >= 1 && w[0] == Y && allOf(w, 1, n, {X, Xp}))
            return {n - 1, 1};
        if (c.state == R && allOf(w, 0, n, {X, Xp}))
            return {n, 0};
        return {-1, -1};
    };
    oracle::ConfigBisim o(spec);
    std::vector<int> judged;
    for (int s = 0; s < b.lts.size(); ++s)
        if (p.has(s))
            judged.push_back(s);
    int grouped = 0;
    for (int s : judged) {
        auto ls = label(b.configs[s]);
        if (ls.first < 0)
            return fail("unexpected configuration " + renderConfiguration(spec, b.configs[s]));
        for (int t : judged) {
            bool same = p.same(s, t);
            if (same != o.eq(b.configs[s], b.configs[t], 6))
                return fail("depth-6 class of " + renderConfiguration(spec, b.configs[s]) + " and " +
                            renderConfiguration(spec, b.configs[t]) + " differs from the recursion");
            if (ls == label(b.configs[t])) {
                if (!same)
                    return fail(renderConfiguration(spec, b.configs[s]) + " and " +
                                renderConfiguration(spec, b.configs[t]) + " split at depth 6");
                ++grouped;
            }
        }
    }
    return {true, std::to_string(judged.size()) + " configurations judged, " + std::to_string(grouped) +
                      " same-class pairs grouped"};
}

// 2: subset-sum characterisation of R-equivalence
Outcome subsetSumEquivalence()
{
    Rng rng(1);
    int mismatches = 0, equivalent = 0;
    for (int i = 0; i < 1000; ++i) {
        int n = uniformInt(rng, 1, 8);
        auto d = randomDistribution(rng, n, uniformInt(rng, 1, std::min(5, n)));
        auto e = uniformInt(rng, 0, 3) == 0 ? d : randomDistribution(rng, n, uniformInt(rng, 1, std::min(5, n)));
        auto R = randomPartition(rng, n, uniformInt(rng, 1, n));
        bool a = lemma1Check(d, e, R), b = rEquivalent(d, e, R);
        mismatches += a != b;
        equivalent += b;
        std::vector<std::vector<char>> rel(n, std::vector<char>(n));
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                rel[x][y] = R.same(x, y);
        mismatches += oracle::relEquivalent(d, e, rel) != b;
    }
    if (mismatches)
        return fail(std::to_string(mismatches) + " mismatches");
    return {true, "1000 pairs, " + std::to_string(equivalent) + " equivalent, 0 mismatches"};
}

// 3 and 4: reduction biconditional and size bounds
Outcome reductionBiconditional()
{
    Rng rng(3);
    int mismatches = 0, distinguished = 0, queries = 0;
    for (int i = 0; i < 200; ++i) {
        Ppda spec = randomPpda(rng, {3, 3, 2, 3, 2, 0.6, false});
        ReducedPda red = buildReduced(spec);
        auto c1 = randomConfiguration(rng, spec, 1, 2), c2 = randomConfiguration(rng, spec, 1, 2);
        oracle::ConfigBisim src(spec), dst(red.spec);
        for (int n = 0; n <= 4; ++n) {
            bool a = src.eq(c1, c2, n), b = dst.eq(c1, c2, 3 * n);
            bool lib = crossValidate(spec, red, c1, c2, n);
            mismatches += (a != b) + !lib;
            distinguished += !a;
            ++queries;
        }
    }
    if (mismatches)
        return fail(std::to_string(mismatches) + " mismatches");
    return {true, std::to_string(queries) + " queries on 200 automata, " + std::to_string(distinguished) +
                      " distinguished, 0 mismatches"};
}

Outcome reductionSizeBounds()
{
    Rng rng(4);
    int violations = 0, checked = 0;
    auto audit = [&](const Ppda& spec, bool visibly) {
        ReducedPda red = visibly ? buildReducedVisibly(spec) : buildReduced(spec);
        SizeStats s = sizeStats(spec, red);
        std::size_t pow = std::size_t(1) << s.m;
        bool ok = s.gammaPrime <= s.gamma + s.rho + s.rho * pow && s.sigmaPrime <= s.sigma + s.w + s.hashActions &&
                  s.rulesUnderHash <= s.rho * pow * s.m && s.gammaPrime == red.spec.stack.size() &&
                  s.sigmaPrime == red.spec.actions.size() && s.withinBounds();
        violations += !ok;
        ++checked;
    };
    audit(loadPpdaFile(dataPath("example1.ppda")), false);
    for (int i = 0; i < 500; ++i)
        audit(randomPpda(rng, {3, 3, 2, 3, 2, 0.6, false}), false);
    for (int i = 0; i < 200; ++i)
        audit(randomPvpda(rng, 3, 3, 3, false), true);
    if (violations)
        return fail(std::to_string(violations) + " violations");
    return {true, std::to_string(checked) + " automata, 0 violations"};
}

// 5: gadget truth tables over every leaf assignment
Outcome gadgetTruthTables()
{
    std::vector<Plts> bases;
    {
        Plts l;
        int a = l.actionIndex("a"), b = l.actionIndex("b"), c = l.actionIndex("c");
        int d = l.addState("d"), lb = l.addState("lb"), lb2 = l.addState("lb2"), lc = l.addState("lc");
        int mix = l.addState("mix");
        l.addMove(lb, b, {{lb, Rational(1)}});
        l.addMove(lb2, b, {{lb2, Rational(1)}});
        l.addMove(lc, c, {{lc, Rational(1)}});
        l.addMove(mix, a, {{d, Rational(1, 2)}, {lb, Rational(1, 2)}});
        bases.push_back(l);
    }
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        Plts l;
        int acts[2] = {l.actionIndex("a"), l.actionIndex("b")};
        for (int s = 0; s < 5; ++s)
            l.addState("b" + std::to_string(s));
        for (int s = 0; s < 5; ++s)
            for (int a : acts)
                if (uniformInt(rng, 0, 2) == 0) {
                    auto dist = randomDistribution(rng, 5, uniformInt(rng, 1, 2));
                    l.addMove(s, a, {dist.entries().begin(), dist.entries().end()});
                }
        bases.push_back(l);
    }
    int instances = 0, skipped = 0, mismatches = 0, maxStates = 0;
    for (std::size_t bi = 0; bi < bases.size(); ++bi)
        for (int orG = 0; orG < 2; ++orG) {
            // leaves range over the base and, for the fixed base, the gadget sources themselves
            int nb = bases[bi].size(), pool = bi == 0 ? nb + 2 : nb;
            for (int code = 0; code < pool * pool * pool * pool; ++code) {
                int t[4], c = code;
                for (int& x : t) {
                    x = c % pool;
                    c /= pool;
                }
                Plts l = bases[bi];
                int a = l.actionIndex("a");
                int s = l.addState("s"), sp = l.addState("s'");
                if (orG)
                    buildOrGadget(l, a, s, sp, t[0], t[1], t[2], t[3]);
                else
                    buildAndGadget(l, a, s, sp, t[0], t[1], t[2], t[3]);
                maxStates = std::max(maxStates, l.size());
                auto R = oracle::naiveBisim(l);
                if (!orG && R[t[0]][t[3]]) {
                    ++skipped; // t1 ~ t2' violates the hypothesis
                    continue;
                }
                bool e1 = R[t[0]][t[1]], e2 = R[t[2]][t[3]];
                bool want = orG ? (e1 || e2) : (e1 && e2);
                mismatches += static_cast<bool>(R[s][sp]) != want;
                auto st = stablePartition(l);
                mismatches += st.partition.same(s, sp) != want;
                ++instances;
            }
        }
    if (maxStates > 12)
        return fail("an instance has " + std::to_string(maxStates) + " states");
    if (mismatches)
        return fail(std::to_string(mismatches) + " mismatches");
    return {true, std::to_string(instances) + " instances (" + std::to_string(skipped) +
                      " outside the hypothesis), at most " + std::to_string(maxStates) + " states, 0 mismatches"};
}

// 6: AFA encoding against acceptance, every AFA with up to three states
Outcome afaEncoding()
{
    long afas = 0, points = 0, mismatches = 0;
    int maxRounds = 0;
    std::string first;
    for (int nq = 1; nq <= 3; ++nq)
        for (const auto& afa : enumerateAfas(nq)) {
            AfaPoca p = afaToPoca(afa);
            int rounds = 0;
            auto bis = afaPocaBisimTable(p, 5, &rounds);
            auto acc = accTable(afa, 5);
            maxRounds = std::max(maxRounds, rounds);
            for (int n = 0; n <= 5; ++n)
                for (int q = 0; q < nq; ++q) {
                    ++points;
                    if (static_cast<bool>(bis[n][q]) == static_cast<bool>(acc[n][q])) {
                        ++mismatches;
                        if (first.empty())
                            first = renderAfa(afa) + " n=" + std::to_string(n);
                    }
                }
            ++afas;
        }
    // independent check of the stabilised verdict on a sample with the defining recursion
    Rng rng(6);
    auto all = enumerateAfas(2);
    for (int i = 0; i < 40; ++i) {
        const auto& afa = all[uniformInt(rng, 0, static_cast<int>(all.size()) - 1)];
        AfaPoca p = afaToPoca(afa);
        oracle::ConfigBisim o(p.spec);
        for (int n = 0; n <= 3; ++n)
            for (int q = 0; q < 2; ++q) {
                bool eq = o.eq(ocaConfig(p.spec, p.q[q], n), ocaConfig(p.spec, p.qp[q], n), maxRounds + 2);
                mismatches += eq == accOracle(afa, q, n);
            }
    }
    if (mismatches)
        return fail(std::to_string(mismatches) + " mismatches, first " + first);
    return {true, std::to_string(afas) + " automata, " + std::to_string(points) +
                      " (q, n) points, stabilised within " + std::to_string(maxRounds) + " rounds, 0 mismatches"};
}

PairSet randomSet(Rng& rng, const PairShape& s, double density)
{
    std::vector<Code> e;
    std::bernoulli_distribution coin(density);
    for (Code c = 0; c < s.pairCount(); ++c)
        if (coin(rng))
            e.push_back(c);
    return PairSet(e);
}

// 7: forcing decisions against bounded refinement; composition against game search
Outcome forcingAgreement()
{
    Rng rng(7);
    int bis = 0, notBis = 0, unsound = 0, missing = 0, queries = 0, disagree = 0;
    std::string first;
    for (int i = 0; i < 300; ++i) {
        Ppda spec = randomPvpda(rng, 3, 2, 2, i % 4 == 0);
        auto c1 = randomConfiguration(rng, spec, 1, 1), c2 = randomConfiguration(rng, spec, 1, 3);
        VpdaDecision d = decideVpda(spec, c1, c2);
        if (d.verdict == VpdaVerdict::Bisimilar) {
            ++bis;
            if (!bisimDepth(spec, c1, c2, 8).equivalent) {
                ++unsound;
                if (first.empty())
                    first = renderPpda(spec);
            }
        } else {
            ++notBis;
            bool found = false;
            // iterative deepening; the ball grows quickly with calls
            try {
                for (int n = 2; n <= 40 && !found; n += 2)
                    found = !bisimDepth(spec, c1, c2, n, 2000000).equivalent;
            } catch (const Error&) {
            }
            if (!found) {
                ++missing;
                if (first.empty())
                    first = renderPpda(spec);
            }
        }
        ReducedPda red = buildReducedVisibly(spec);
        for (int a = 0; a < static_cast<int>(spec.actions.size()); ++a) {
            ForcingRelation f = localForcingProbabilistic(spec, red, a);
            for (Code h = 0; h < f.dom.pairCount(); ++h) {
                std::vector<PairSet> sets{PairSet{}};
                for (int t = 0; t < 3; ++t)
                    sets.push_back(randomSet(rng, f.cod, 0.5));
                if (f.entries.count(h))
                    for (const auto& m : f.entries.at(h).members())
                        sets.push_back(m.set);
                for (const auto& A : sets) {
                    bool comp = f.holds(h, A);
                    disagree += comp != localForcingGame(spec, red, a, h, A);
                    disagree += comp != oracle::attackerForces(spec, red, a, h, A);
                    ++queries;
                }
            }
        }
    }
    if (unsound || missing || disagree)
        return fail(std::to_string(unsound) + " bisimilar verdicts refuted, " + std::to_string(missing) +
                    " refutations not found, " + std::to_string(disagree) + " membership disagreements\n" + first);
    return {true, std::to_string(bis) + " bisimilar, " + std::to_string(notBis) + " not bisimilar, " +
                      std::to_string(queries) + " membership queries, 0 disagreements"};
}

// 8: game winner transfers to bisimilarity of the encoding
Outcome gameTransfer()
{
    Rng rng(8);
    int games = 0, mismatches = 0, p0 = 0;
    for (int i = 0; i < 2000 && games < 40; ++i) {
        PushdownGame g = randomGame(rng, 4, 2);
        if (!gameSuitable(g))
            continue;
        GameSolution s = solveGameBounded(g, 64);
        if (s.winner == GameWinner::Unresolved)
            continue;
        auto o = oracle::solveGame(g);
        GamePvpda e = gameToPvpda(g);
        bool bis = decideVpda(e.spec, e.left, e.right).verdict == VpdaVerdict::Bisimilar;
        mismatches += bis != (s.winner == GameWinner::Player0);
        mismatches += o && *o != s.winner;
        p0 += s.winner == GameWinner::Player0;
        ++games;
    }
    if (games < 10)
        return fail("only " + std::to_string(games) + " suitable games");
    if (mismatches)
        return fail(std::to_string(mismatches) + " mismatches");
    return {true, std::to_string(games) + " games (" + std::to_string(p0) + " won by Player 0), 0 mismatches"};
}

// 9: pOCA suite
Outcome pocaSuite()
{
    Rng rng(9);
    int incBad = 0, stableBad = 0, spot = 0;
    for (int i = 0; i < 100; ++i) {
        int k = uniformInt(rng, 1, 3);
        Ppda spec = randomPoca(rng, k);
        auto inc = computeInc(spec);
        for (const auto& c : inc)
            incBad += static_cast<int>(c.stack.size()) - 1 >= k;
        std::set<Configuration> a(inc.begin(), inc.end());
        auto naive = oracle::naiveInc(spec, k, k + 3);
        incBad += a != std::set<Configuration>(naive.begin(), naive.end());
        for (int t = 0; t < 4; ++t) {
            int p = uniformInt(rng, 0, k - 1), q = uniformInt(rng, 0, k - 1);
            int m = uniformInt(rng, 0, 4), n = uniformInt(rng, 0, 4);
            if (exactDist(spec, p, m) || exactDist(spec, q, n))
                continue;
            Configuration c1 = ocaConfig(spec, p, m), c2 = ocaConfig(spec, q, n);
            bool v = bisimDepth(spec, c1, c2, k).equivalent;
            for (int j = k + 1; j <= k + 5; ++j)
                stableBad += bisimDepth(spec, c1, c2, j).equivalent != v;
            ++spot;
        }
    }
    int fragments = 0, perturbed = 0, accepted = 0, rejected = 0;
    for (int i = 0; i < 4000 && perturbed < 100; ++i) {
        Ppda spec;
        std::vector<Configuration> roots;
        if (i % 2 == 0) {
            spec = randomPoca(rng, uniformInt(rng, 2, 3), 2, 0.7);
            int k = static_cast<int>(spec.states.size());
            roots = {ocaConfig(spec, uniformInt(rng, 0, k - 1), uniformInt(rng, 0, 3)),
                     ocaConfig(spec, uniformInt(rng, 0, k - 1), uniformInt(rng, 0, 3))};
        } else {
            spec = randomPpda(rng, {3, 2, 2, 3, 1, 0.6, false});
            roots = {randomConfiguration(rng, spec, 1, 1), randomConfiguration(rng, spec, 1, 1)};
        }
        Ball b;
        try {
            b = unfoldClosed(spec, roots, 400);
        } catch (const Error&) {
            continue;
        }
        auto expanded = expandedStates(b);
        auto st = stablePartition(b.lts);
        accepted += consistencyCheck(b.lts, expanded, pairsOf(st.partition)).consistent;
        ++fragments;
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
        rejected += !consistencyCheck(b.lts, expanded, pairsOf(bad)).consistent;
        ++perturbed;
    }
    std::ostringstream d;
    d << "INC bound/oracle failures " << incBad << ", " << spot << " infinite-dist pairs with " << stableBad
      << " unstable, " << accepted << "/" << fragments << " fragments accepted, " << rejected << "/" << perturbed
      << " perturbations rejected";
    bool ok = incBad == 0 && stableBad == 0 && spot > 0 && accepted == fragments && fragments > 0 &&
              perturbed == 100 && rejected == perturbed;
    return {ok, d.str()};
}

// 10: the unbounded claims are documented as out of reach
Outcome unboundedDocumented()
{
    std::ifstream f(std::string(PPDA_SOURCE_DIR) + "/README.md");
    std::stringstream ss;
    ss << f.rdbuf();
    std::string t = ss.str();
    if (t.find("## Not reproduced") == std::string::npos)
        return fail("README has no 'Not reproduced' section");
    for (const char* cited : {"criteria 3, 6, 7 and 8", "pBPA", "PSPACE", "EXPTIME"})
        if (t.find(cited) == std::string::npos)
            return fail(std::string("README section does not mention ") + cited);
    return {true, "documented in README (finite-instance evidence only)"};
}

} // namespace

int main()
{
    std::vector<Criterion> criteria{
        {1, "example pair and its bisimulation classes", 10, exampleReproduction},
        {2, "subset-sum test for R-equivalence", 30, subsetSumEquivalence},
        {3, "reduction preserves bisimilarity approximants", 300, reductionBiconditional},
        {4, "reduction size bounds", 0, reductionSizeBounds},
        {5, "AND and OR gadget truth tables", 60, gadgetTruthTables},
        {6, "AFA encoding agrees with acceptance", 600, afaEncoding},
        {7, "forcing decisions and local relations", 600, forcingAgreement},
        {8, "game winner transfers to the encoding", 0, gameTransfer},
        {9, "pOCA suite", 300, pocaSuite},
        {10, "unbounded claims documented", 0, unboundedDocumented},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = fail(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limitSeconds > 0 && secs > c.limitSeconds) {
            o.pass = false;
            o.detail += " (time limit " + std::to_string(static_cast<int>(c.limitSeconds)) + " s exceeded)";
        }
        failed += !o.pass;
        std::printf("%s [%d] %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
