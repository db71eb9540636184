#include "ppda/cli.hh"

#include "ppda/error.hh"
#include "ppda/gadgets.hh"
#include "ppda/oca.hh"
#include "ppda/random_gen.hh"
#include "ppda/reduction.hh"
#include "ppda/semantics.hh"
#include "ppda/text_format.hh"
#include "ppda/vpda.hh"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ppda {

namespace {

using nlohmann::ordered_json;

const char* kBudgetVar = "PPDA_STATE_CAP";

std::size_t stateCap(long long flag)
{
    if (flag > 0)
        return static_cast<std::size_t>(flag);
    if (const char* v = std::getenv(kBudgetVar)) {
        char* end = nullptr;
        long long n = std::strtoll(v, &end, 10);
        if (end && *end == '\0' && n > 0)
            return static_cast<std::size_t>(n);
    }
    return kDefaultStateCap;
}

int exitFor(ErrorCode c)
{
    return c == ErrorCode::BudgetExceeded || c == ErrorCode::Frontier ? kExitInconclusive : kExitUsage;
}

Ppda loadValid(const std::string& path)
{
    Ppda spec = loadPpdaFile(path);
    auto rep = validate(spec);
    if (!rep.empty())
        throw Error(ErrorCode::Unvalidated, "line " + std::to_string(rep.front().line) + ": " + rep.front().message);
    return spec;
}

ordered_json issuesJson(const ValidationReport& r)
{
    ordered_json a = ordered_json::array();
    for (const auto& i : r)
        a.push_back({{"line", i.line}, {"rule", i.rule}, {"message", i.message}});
    return a;
}

struct Ctx {
    std::ostream& out;
    std::ostream& err;
};

int cmdValidate(Ctx& c, const std::string& file, bool json)
{
    auto pr = parsePpdaFile(file);
    ValidationReport issues = pr.issues;
    if (issues.empty())
        issues = validate(pr.spec);
    if (json) {
        c.out << ordered_json{{"command", "validate"}, {"file", file}, {"valid", issues.empty()},
                              {"issues", issuesJson(issues)}}
                     .dump(2)
              << "\n";
    } else if (issues.empty()) {
        c.out << "valid: " << pr.spec.states.size() << " states, " << pr.spec.stack.size() << " stack symbols, "
              << pr.spec.actions.size() << " actions, " << pr.spec.rules.size() << " rules\n";
    } else {
        for (const auto& i : issues)
            c.out << "line " << i.line << ": " << (i.rule >= 0 ? "rule " + std::to_string(i.rule) + ": " : "")
                  << i.message << "\n";
    }
    return issues.empty() ? kExitOk : kExitViolation;
}

int cmdClassify(Ctx& c, const std::string& file, bool json)
{
    Ppda spec = loadPpdaFile(file);
    auto names = classify(spec).names();
    if (json) {
        c.out << ordered_json{{"command", "classify"}, {"file", file}, {"subclasses", names},
                              {"states", spec.states.size()}, {"stack", spec.stack.size()},
                              {"actions", spec.actions.size()}, {"rules", spec.rules.size()}}
                     .dump(2)
              << "\n";
    } else {
        c.out << "subclasses:";
        if (names.empty())
            c.out << " none";
        for (const auto& n : names)
            c.out << " " << n;
        c.out << "\n";
    }
    return kExitOk;
}

int cmdCheck(Ctx& c, const std::string& file, const std::string& s1, const std::string& s2, int depth,
             long long cap, bool dump, bool dot, bool json)
{
    Ppda spec = loadValid(file);
    Configuration c1 = parseConfiguration(spec, s1), c2 = parseConfiguration(spec, s2);
    Ball ball = unfold(spec, c1, c2, depth, stateCap(cap));
    DepthVerdict v = bisimDepthOnBall(ball, depth);
    std::string r1 = renderConfiguration(spec, c1), r2 = renderConfiguration(spec, c2);
    if (json) {
        ordered_json j{{"command", "check"}, {"file", file},   {"c1", r1},
                       {"c2", r2},           {"depth", depth}, {"verdict", v.str()},
                       {"equivalent", v.equivalent}};
        j["distinguishing_depth"] = v.equivalent ? ordered_json(nullptr) : ordered_json(v.depth);
        j["ball_states"] = ball.lts.size();
        c.out << j.dump(2) << "\n";
    } else {
        c.out << v.str() << "\n";
        if (v.equivalent)
            c.out << r1 << " and " << r2 << ": equivalent at depth " << depth << " (bounded)\n";
        else
            c.out << r1 << " and " << r2 << ": not bisimilar, distinguished at depth " << v.depth << "\n";
        c.out << "ball: " << ball.lts.size() << " configurations, radius " << ball.radius << "\n";
    }
    if (dump)
        c.out << dumpBall(spec, ball, bisimClasses(spec, ball, depth));
    if (dot)
        c.out << dotBall(spec, ball);
    return v.equivalent ? kExitOk : kExitViolation;
}

ordered_json statsJson(const SizeStats& s)
{
    return ordered_json{{"gamma", s.gamma},
                        {"gamma_prime", s.gammaPrime},
                        {"sigma", s.sigma},
                        {"sigma_prime", s.sigmaPrime},
                        {"rho", s.rho},
                        {"m", s.m},
                        {"w", s.w},
                        {"rules_under_sigma", s.rulesUnderSigma},
                        {"rules_under_weight", s.rulesUnderWeight},
                        {"rules_under_weight_max", s.rulesUnderWeightMax},
                        {"rules_under_hash", s.rulesUnderHash}};
}

int cmdReduce(Ctx& c, const std::string& file, bool visibly, bool stats, int supportCap, bool json)
{
    Ppda spec = loadValid(file);
    ReducedPda red = visibly ? buildReducedVisibly(spec, supportCap) : buildReduced(spec, supportCap);
    SizeStats s = sizeStats(spec, red);
    std::vector<std::string> why;
    bool ok = s.withinBounds(&why);
    if (json) {
        ordered_json j{{"command", "reduce"}, {"file", file}, {"visibly", visibly}, {"stats", statsJson(s)},
                       {"within_bounds", ok},  {"violations", why}};
        if (!stats)
            j["automaton"] = renderPpda(red.spec);
        c.out << j.dump(2) << "\n";
    } else {
        if (!stats)
            c.out << renderPpda(red.spec);
        if (stats) {
            c.out << "|Gamma| " << s.gamma << " -> |Gamma'| " << s.gammaPrime << " (bound "
                  << s.gamma + s.rho + s.rho * (std::size_t(1) << s.m) << ")\n";
            c.out << "|Sigma| " << s.sigma << " -> |Sigma'| " << s.sigmaPrime << " (bound "
                  << s.sigma + s.w + s.hashActions << ")\n";
            c.out << "|rho| " << s.rho << ", m " << s.m << ", |W| " << s.w << "\n";
            c.out << "rules under source actions " << s.rulesUnderSigma << ", under weights " << s.rulesUnderWeight
                  << " (max per weight " << s.rulesUnderWeightMax << "), under # " << s.rulesUnderHash << " (bound "
                  << s.rho * (std::size_t(1) << s.m) * s.m << ")\n";
            c.out << (ok ? "bounds: ok\n" : "bounds: VIOLATED\n");
            for (const auto& w : why)
                c.out << "  " << w << "\n";
        }
    }
    return ok ? kExitOk : kExitViolation;
}

int cmdVpda(Ctx& c, const std::string& file, const std::string& s1, const std::string& s2, bool dumpF, bool cert,
            bool json)
{
    Ppda spec = loadValid(file);
    Configuration c1 = parseConfiguration(spec, s1), c2 = parseConfiguration(spec, s2);
    VpdaDecision d = decideVpda(spec, c1, c2);
    std::string r1 = renderConfiguration(spec, c1), r2 = renderConfiguration(spec, c2);
    bool bis = d.verdict == VpdaVerdict::Bisimilar;
    std::string failure;
    int failures = cert ? verifyAnnotations(spec, d.forcing, &failure) : 0;
    if (json) {
        ordered_json j{{"command", "vpda-decide"},
                       {"file", file},
                       {"c1", r1},
                       {"c2", r2},
                       {"verdict", vpdaVerdictName(d.verdict)},
                       {"rounds", d.forcing.rounds},
                       {"minimal_entries", d.forcing.fhat.memberCount()},
                       {"monotone", d.forcing.monotone}};
        if (dumpF)
            j["forcing"] = dumpForcing(spec, d.forcing.fhat);
        if (cert) {
            j["certificate"] = dumpAnnotations(spec, d.forcing.fhat);
            j["annotation_failures"] = failures;
        }
        c.out << j.dump(2) << "\n";
    } else {
        c.out << vpdaVerdictName(d.verdict) << "\n";
        c.out << r1 << " and " << r2 << ": " << (bis ? "bisimilar" : "not bisimilar") << " (exact, forcing)\n";
        c.out << "Kleene rounds " << d.forcing.rounds << ", minimal entries " << d.forcing.fhat.memberCount() << "\n";
        if (dumpF)
            c.out << dumpForcing(spec, d.forcing.fhat);
        if (cert) {
            c.out << dumpAnnotations(spec, d.forcing.fhat);
            c.out << "annotation failures " << failures << (failure.empty() ? "" : " first " + failure) << "\n";
        }
    }
    if (failures > 0)
        return kExitViolation;
    return bis ? kExitOk : kExitViolation;
}

struct OcaOptions {
    std::string c1, c2;
    int distMax = -1;
    GridBounds bounds;
    std::string verify;
    std::string emit;
    std::vector<std::string> belts;
    bool json = false;
};

Belt parseBelt(const std::string& s)
{
    Belt b;
    char x, y, z;
    std::istringstream is(s);
    if (!(is >> b.c >> x >> b.d >> y >> b.offset >> z >> b.thickness) || x != ':' || y != ':' || z != ':' ||
        !is.eof())
        throw Error(ErrorCode::Parse, "belt shapes look like c:d:offset:thickness");
    return b;
}

int cmdOca(Ctx& c, const std::string& file, const OcaOptions& o)
{
    Ppda spec = loadValid(file);
    requirePoca(spec);
    int k = static_cast<int>(spec.states.size());
    int distMax = o.distMax >= 0 ? o.distMax : k * k;
    auto inc = computeInc(spec);
    ordered_json j{{"command", "oca-analyze"}, {"file", file}, {"k", k}};
    std::ostringstream txt;
    txt << "pOCA with k = " << k << " control states\nINC:";
    ordered_json incJ = ordered_json::array();
    for (const auto& cfg : inc) {
        txt << " " << renderConfiguration(spec, cfg);
        incJ.push_back(renderConfiguration(spec, cfg));
    }
    txt << (inc.empty() ? " (empty)\n" : "\n");
    j["inc"] = incJ;
    txt << "dist (counter 0.." << distMax << "):\n";
    ordered_json distJ = ordered_json::object();
    for (int s = 0; s < k; ++s) {
        txt << "  " << spec.states[s] << ":";
        ordered_json row = ordered_json::array();
        for (int m = 0; m <= distMax; ++m) {
            auto d = exactDist(spec, s, m);
            txt << " " << (d ? std::to_string(*d) : "inf");
            row.push_back(d ? ordered_json(*d) : ordered_json("inf"));
        }
        txt << "\n";
        distJ[spec.states[s]] = row;
    }
    j["dist"] = distJ;
    int code = kExitOk;
    if (!o.c1.empty()) {
        Configuration c1 = parseConfiguration(spec, o.c1), c2 = parseConfiguration(spec, o.c2);
        GridResult g = decideBoundedGrid(spec, c1, c2, o.bounds);
        txt << "grid " << renderConfiguration(spec, c1) << " vs " << renderConfiguration(spec, c2) << " (m <= "
            << g.bounds.mMax << ", n <= " << g.bounds.nMax << "): " << gridVerdictName(g.verdict);
        if (g.verdict == GridVerdict::NotBisimilar && g.witnessDepth >= 0)
            txt << ", distinguished at depth " << g.witnessDepth;
        txt << "\n  " << g.reason << "\n";
        j["grid"] = {{"verdict", gridVerdictName(g.verdict)},
                     {"witness_depth", g.witnessDepth >= 0 ? ordered_json(g.witnessDepth) : ordered_json(nullptr)},
                     {"reason", g.reason},
                     {"m_max", g.bounds.mMax},
                     {"n_max", g.bounds.nMax}};
        code = g.verdict == GridVerdict::BisimilarCertified ? kExitOk
               : g.verdict == GridVerdict::NotBisimilar     ? kExitViolation
                                                            : kExitInconclusive;
        if (!o.emit.empty()) {
            std::vector<Belt> shapes;
            for (const auto& b : o.belts)
                shapes.push_back(parseBelt(b));
            Colouring chi = certificateFromGrid(spec, g, shapes);
            std::ofstream f(o.emit);
            if (!f)
                throw Error(ErrorCode::Parse, "cannot write '" + o.emit + "'");
            f << renderCertificate(spec, chi);
            txt << "certificate written to " << o.emit << "\n";
            j["certificate_file"] = o.emit;
        }
    }
    if (!o.verify.empty()) {
        Colouring chi = parseCertificate(spec, readFile(o.verify));
        CertificateVerdict v = verifyPeriodicCertificate(spec, chi);
        if (v.accepted) {
            txt << "certificate ACCEPTED\n";
        } else {
            txt << "certificate REJECTED at (" << v.point.m << ", " << v.point.n << ", " << spec.states[v.point.p]
                << ", " << spec.states[v.point.q] << "): " << v.reason << "\n";
        }
        j["certificate"] = {{"accepted", v.accepted},
                            {"m", v.point.m},
                            {"n", v.point.n},
                            {"p", spec.states[v.point.p]},
                            {"q", spec.states[v.point.q]},
                            {"reason", v.reason}};
        if (!v.accepted)
            code = kExitViolation;
    }
    if (o.json)
        c.out << j.dump(2) << "\n";
    else
        c.out << txt.str();
    return code;
}

// Truth table of a gadget over leaf states with distinct behaviours.
int gadgetDemo(Ctx& c, bool orGadget, bool json)
{
    ordered_json rows = ordered_json::array();
    bool allOk = true;
    if (!json)
        c.out << (orGadget ? "OR" : "AND") << " gadget: s ~ s' iff t1 ~ t1' " << (orGadget ? "or" : "and")
              << " t2 ~ t2'\nt1~t1' t2~t2' s~s'\n";
    for (int e1 = 1; e1 >= 0; --e1)
        for (int e2 = 1; e2 >= 0; --e2) {
            Plts l;
            int a = l.actionIndex("a"), b = l.actionIndex("b"), cc = l.actionIndex("c");
            int d0 = l.addState("d0"), d1 = l.addState("d1");
            int lb = l.addState("lb"), lb2 = l.addState("lb2"), lc = l.addState("lc");
            l.addMove(lb, b, {{lb, Rational(1)}});
            l.addMove(lb2, b, {{lb2, Rational(1)}});
            l.addMove(lc, cc, {{lc, Rational(1)}});
            int s = l.addState("s"), sp = l.addState("s'");
            int t1 = d0, t1p = e1 ? d1 : lc, t2 = lb, t2p = e2 ? lb2 : lc;
            if (orGadget)
                buildOrGadget(l, a, s, sp, t1, t1p, t2, t2p);
            else
                buildAndGadget(l, a, s, sp, t1, t1p, t2, t2p);
            auto st = stablePartition(l);
            bool got = st.partition.same(s, sp);
            bool want = orGadget ? (e1 || e2) : (e1 && e2);
            allOk = allOk && got == want;
            if (!json)
                c.out << e1 << "      " << e2 << "      " << got << (got == want ? "" : "  MISMATCH") << "\n";
            rows.push_back({{"t1_t1p", e1 == 1}, {"t2_t2p", e2 == 1}, {"s_sp", got}, {"expected", want}});
        }
    if (json)
        c.out << ordered_json{{"command", "gadget"}, {"gadget", orGadget ? "or" : "and"}, {"rows", rows},
                              {"ok", allOk}}
                     .dump(2)
              << "\n";
    return allOk ? kExitOk : kExitViolation;
}

int emitText(Ctx& c, const std::string& text, const std::string& outPath)
{
    if (outPath.empty() || outPath == "-") {
        c.out << text;
    } else {
        std::ofstream f(outPath);
        if (!f)
            throw Error(ErrorCode::Parse, "cannot write '" + outPath + "'");
        f << text;
    }
    return kExitOk;
}

int cmdAfa2Poca(Ctx& c, const std::string& file, const std::string& outPath)
{
    OneLetterAfa afa = parseAfa(readFile(file));
    AfaPoca p = afaToPoca(afa);
    std::string text = "# initial pair: " + renderConfiguration(p.spec, ocaConfig(p.spec, p.p, 1)) + " " +
                       renderConfiguration(p.spec, ocaConfig(p.spec, p.pp, 1)) + "\n" + renderPpda(p.spec);
    return emitText(c, text, outPath);
}

int cmdGame2Pvpda(Ctx& c, const std::string& file, const std::string& outPath)
{
    PushdownGame g = parseGame(readFile(file));
    GamePvpda p = gameToPvpda(g);
    std::string text = "# initial pair: " + renderConfiguration(p.spec, p.left) + " " +
                       renderConfiguration(p.spec, p.right) + "\n" + renderPpda(p.spec);
    return emitText(c, text, outPath);
}

struct DiffCounts {
    int run = 0, agree = 0, skipped = 0, disagree = 0;
};

int cmdDifftest(Ctx& c, std::uint64_t seed, int count, bool json)
{
    Rng rng(seed);
    const char* names[] = {"reduction", "forcing", "afa", "game"};
    DiffCounts counts[4];
    std::vector<std::string> failures;
    for (int i = 0; i < count; ++i) {
        int kind = i % 4;
        DiffCounts& dc = counts[kind];
        ++dc.run;
        try {
            bool ok = true;
            std::string what;
            if (kind == 0) {
                RandomPpdaParams p;
                Ppda spec = randomPpda(rng, p);
                Configuration c1 = randomConfiguration(rng, spec, 1, 2), c2 = randomConfiguration(rng, spec, 1, 2);
                int n = uniformInt(rng, 0, 3);
                ok = crossValidate(spec, c1, c2, n, 200000);
                what = "~_n vs ~_3n at n = " + std::to_string(n);
            } else if (kind == 1) {
                Ppda spec = randomPvpda(rng, 3, 2, 2, uniformInt(rng, 0, 1) == 1);
                Configuration c1 = randomConfiguration(rng, spec, 1, 1), c2 = randomConfiguration(rng, spec, 1, 2);
                auto d = decideVpda(spec, c1, c2);
                auto b = bisimDepth(spec, c1, c2, 8, 200000);
                if (d.verdict == VpdaVerdict::Bisimilar) {
                    ok = b.equivalent;
                    what = "forcing says bisimilar, refinement distinguishes";
                } else {
                    ok = !b.equivalent;
                    what = "forcing says not bisimilar, no distinguishing depth up to 8";
                    if (!ok) {
                        try {
                            ok = !bisimDepth(spec, c1, c2, 14, 500000).equivalent;
                        } catch (const Error& e) {
                            if (e.code() != ErrorCode::BudgetExceeded)
                                throw;
                            ++dc.skipped;
                            continue;
                        }
                    }
                }
            } else if (kind == 2) {
                int nq = uniformInt(rng, 1, 3);
                OneLetterAfa afa;
                for (int q = 0; q < nq; ++q) {
                    afa.states.push_back("q" + std::to_string(q));
                    afa.accepting.push_back(static_cast<char>(uniformInt(rng, 0, 1)));
                    afa.delta.push_back({uniformInt(rng, 0, 1) == 1, uniformInt(rng, 0, nq - 1),
                                         uniformInt(rng, 0, nq - 1)});
                }
                auto poca = afaToPoca(afa);
                auto acc = accTable(afa, 5);
                auto bis = afaPocaBisimTable(poca, 5);
                for (int n = 0; n <= 5; ++n)
                    for (int q = 0; q < nq; ++q)
                        ok = ok && (acc[n][q] == !bis[n][q]);
                what = "Acc(q,n) vs qX^nZ ~ q'X^nZ";
            } else {
                PushdownGame g;
                int tries = 0;
                do
                    g = randomGame(rng, 4, 2);
                while (!gameSuitable(g) && ++tries < 100);
                if (!gameSuitable(g)) {
                    ++dc.skipped;
                    continue;
                }
                auto sol = solveGameBounded(g, 64);
                auto red = gameToPvpda(g);
                auto d = decideVpda(red.spec, red.left, red.right);
                ok = (sol.winner == GameWinner::Player0) == (d.verdict == VpdaVerdict::Bisimilar);
                what = "game winner vs forcing verdict";
            }
            if (ok) {
                ++dc.agree;
            } else {
                ++dc.disagree;
                failures.push_back(std::string(names[kind]) + " instance " + std::to_string(i) + ": " + what);
            }
        } catch (const Error& e) {
            if (e.code() != ErrorCode::BudgetExceeded)
                throw;
            ++dc.skipped;
        }
    }
    int total = 0;
    for (const auto& dc : counts)
        total += dc.disagree;
    if (json) {
        ordered_json j{{"command", "difftest"}, {"seed", seed}, {"count", count}};
        for (int k = 0; k < 4; ++k)
            j[names[k]] = {{"run", counts[k].run},
                           {"agree", counts[k].agree},
                           {"skipped", counts[k].skipped},
                           {"disagree", counts[k].disagree}};
        j["failures"] = failures;
        j["disagreements"] = total;
        c.out << j.dump(2) << "\n";
    } else {
        c.out << "difftest seed " << seed << ", " << count << " instances\n";
        for (int k = 0; k < 4; ++k)
            c.out << "  " << names[k] << ": " << counts[k].agree << "/" << counts[k].run << " agree, "
                  << counts[k].skipped << " skipped (budget)\n";
        for (const auto& f : failures)
            c.out << "  DISAGREE " << f << "\n";
        c.out << (total == 0 ? "all instances agree\n" : std::to_string(total) + " disagreements\n");
    }
    return total == 0 ? kExitOk : kExitViolation;
}

} // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Ctx ctx{out, err};
    CLI::App app{"Bisimilarity tools for probabilistic pushdown automata.\n"
                 "Exit status: 0 bisimilar/success, 1 not bisimilar/violation, 2 inconclusive, 3 usage or input "
                 "error.\nThe environment variable PPDA_STATE_CAP overrides the default unfolding budget of " +
                     std::to_string(kDefaultStateCap) + " configurations.",
                 "ppda"};
    app.require_subcommand(1);

    std::string file, s1, s2, outPath;
    bool json = false;

    auto* validateCmd = app.add_subcommand("validate", "check well-formedness of an automaton file");
    validateCmd->add_option("file", file, "automaton file")->required();
    validateCmd->add_flag("--json", json, "structured output");

    auto* classifyCmd = app.add_subcommand("classify", "report the subclasses an automaton belongs to");
    classifyCmd->add_option("file", file, "automaton file")->required();
    classifyCmd->add_flag("--json", json, "structured output");

    int depth = 8;
    long long cap = 0;
    bool dump = false, dot = false;
    auto* checkCmd = app.add_subcommand("check", "bounded bisimilarity ~_n of two configurations");
    checkCmd->add_option("file", file, "automaton file")->required();
    checkCmd->add_option("c1", s1, "first configuration, e.g. pXZ")->required();
    checkCmd->add_option("c2", s2, "second configuration")->required();
    checkCmd->add_option("--depth,-n", depth, "approximant depth")->capture_default_str()->check(CLI::NonNegativeNumber);
    checkCmd->add_option("--cap", cap, "configuration budget (default from PPDA_STATE_CAP or 1000000)");
    checkCmd->add_flag("--dump", dump, "print the unfolded ball with its ~_n classes");
    checkCmd->add_flag("--dot", dot, "print the unfolded ball as a graphviz digraph");
    checkCmd->add_flag("--json", json, "structured output");

    bool visibly = false, stats = false;
    int supportCap = kDefaultSupportCap;
    auto* reduceCmd = app.add_subcommand("reduce", "encode probabilistic branching as nondeterminism");
    reduceCmd->add_option("file", file, "automaton file")->required();
    reduceCmd->add_flag("--visibly", visibly, "keep the visibly partition (#r, #int, #c)");
    reduceCmd->add_flag("--stats", stats, "print size statistics and the analytic bounds instead of the automaton");
    reduceCmd->add_option("--support-cap", supportCap, "largest allowed support")->capture_default_str();
    reduceCmd->add_flag("--json", json, "structured output");

    bool dumpForcingF = false, certF = false;
    auto* vpdaCmd = app.add_subcommand("vpda-decide", "exact bisimilarity of p0X0 and q0Y0beta for (p)vPDA");
    vpdaCmd->add_option("file", file, "automaton file with a visibility header")->required();
    vpdaCmd->add_option("c1", s1, "configuration p0X0")->required();
    vpdaCmd->add_option("c2", s2, "configuration q0Y0beta")->required();
    vpdaCmd->add_flag("--dump-forcing", dumpForcingF, "print the antichains of the largest forcing relation");
    vpdaCmd->add_flag("--certificate", certF, "print and re-check the strategy annotations");
    vpdaCmd->add_flag("--json", json, "structured output");

    OcaOptions oca;
    std::vector<std::string> ocaPos;
    auto* ocaCmd = app.add_subcommand("oca-analyze", "INC, dist and the bounded grid procedure for pOCA");
    ocaCmd->add_option("file", file, "pOCA automaton file over stack symbols X and Z")->required();
    ocaCmd->add_option("configs", ocaPos, "two configurations pX^mZ qX^nZ for the grid verdict")->expected(0, 2);
    ocaCmd->add_option("--dist-max", oca.distMax, "largest counter in the dist table (default k^2)");
    ocaCmd->add_option("--m-max", oca.bounds.mMax, "grid bound on m (default k^2)");
    ocaCmd->add_option("--n-max", oca.bounds.nMax, "grid bound on n (default k^2)");
    ocaCmd->add_option("--k-depth", oca.bounds.kDepth, "approximant depth for background colours (default k)");
    ocaCmd->add_option("--dist-budget", oca.bounds.distBudget, "finite distances beyond this are unresolved (default 1000000)");
    ocaCmd->add_option("--witness-cap", oca.bounds.witnessCap, "largest depth searched for a witness")->capture_default_str();
    ocaCmd->add_option("--verify-certificate", oca.verify, "check a periodic colouring certificate");
    ocaCmd->add_option("--emit-certificate", oca.emit, "write a certificate built from the grid run");
    ocaCmd->add_option("--belt", oca.belts, "belt shape c:d:offset:thickness for --emit-certificate");
    ocaCmd->add_flag("--json", json, "structured output");

    auto* gadgetCmd = app.add_subcommand("gadget", "hardness constructions and gadget demos");
    gadgetCmd->require_subcommand(1);
    auto* afaCmd = gadgetCmd->add_subcommand("afa2poca", "one-letter AFA to unary fully probabilistic pOCA");
    afaCmd->add_option("file", file, "AFA file")->required();
    afaCmd->add_option("-o,--output", outPath, "output file (default stdout)");
    auto* gameCmd = gadgetCmd->add_subcommand("game2pvpda", "pushdown reachability game to pvPDA");
    gameCmd->add_option("file", file, "game file")->required();
    gameCmd->add_option("-o,--output", outPath, "output file (default stdout)");
    auto* andCmd = gadgetCmd->add_subcommand("and-demo", "truth table of the AND gadget");
    andCmd->add_flag("--json", json, "structured output");
    auto* orCmd = gadgetCmd->add_subcommand("or-demo", "truth table of the OR gadget");
    orCmd->add_flag("--json", json, "structured output");

    std::uint64_t seed = 1;
    int count = 100;
    auto* diffCmd = app.add_subcommand("difftest", "random cross-validation of the procedures");
    diffCmd->add_option("--seed", seed, "random seed")->capture_default_str();
    diffCmd->add_option("--count", count, "number of instances")->capture_default_str();
    diffCmd->add_flag("--json", json, "structured output");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*validateCmd)
            return cmdValidate(ctx, file, json);
        if (*classifyCmd)
            return cmdClassify(ctx, file, json);
        if (*checkCmd)
            return cmdCheck(ctx, file, s1, s2, depth, cap, dump, dot, json);
        if (*reduceCmd)
            return cmdReduce(ctx, file, visibly, stats, supportCap, json);
        if (*vpdaCmd)
            return cmdVpda(ctx, file, s1, s2, dumpForcingF, certF, json);
        if (*ocaCmd) {
            if (ocaPos.size() == 1)
                throw Error(ErrorCode::Parse, "oca-analyze takes zero or two configurations");
            if (ocaPos.size() == 2) {
                oca.c1 = ocaPos[0];
                oca.c2 = ocaPos[1];
            }
            if (!oca.emit.empty() && oca.c1.empty())
                throw Error(ErrorCode::Parse, "--emit-certificate needs two configurations");
            oca.json = json;
            return cmdOca(ctx, file, oca);
        }
        if (*afaCmd)
            return cmdAfa2Poca(ctx, file, outPath);
        if (*gameCmd)
            return cmdGame2Pvpda(ctx, file, outPath);
        if (*andCmd)
            return gadgetDemo(ctx, false, json);
        if (*orCmd)
            return gadgetDemo(ctx, true, json);
        if (*diffCmd)
            return cmdDifftest(ctx, seed, count, json);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exitFor(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace ppda
