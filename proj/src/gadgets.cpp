#include "ppda/gadgets.hh"

#include "ppda/error.hh"
#include "ppda/oca.hh"
#include "ppda/semantics.hh"
#include "ppda/text_format.hh"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>

namespace ppda {

namespace {

const Rational kHalf = Rational::parse("1/2");

void requireFresh(const Plts& lts, int s)
{
    if (!lts.out.at(s).empty())
        throw Error(ErrorCode::Redefined, "state '" + lts.names[s] + "' already has transitions");
}

void half(Plts& lts, int action, int s, int t1, int t2)
{
    lts.addMove(s, action, {{t1, kHalf}, {t2, kHalf}});
}

} // namespace

void buildAndGadget(Plts& lts, int action, int s, int sp, int t1, int t1p, int t2, int t2p)
{
    requireFresh(lts, s);
    requireFresh(lts, sp);
    half(lts, action, s, t1, t2);
    half(lts, action, sp, t1p, t2p);
}

OrGadgetStates buildOrGadget(Plts& lts, int action, int s, int sp, int t1, int t1p, int t2, int t2p)
{
    requireFresh(lts, s);
    requireFresh(lts, sp);
    OrGadgetStates u;
    const std::string& n = lts.names[s];
    u.u12 = lts.addState("u12(" + n + ")");
    u.u1p2p = lts.addState("u1'2'(" + n + ")");
    u.u12p = lts.addState("u12'(" + n + ")");
    u.u1p2 = lts.addState("u1'2(" + n + ")");
    half(lts, action, s, u.u12, u.u1p2p);
    half(lts, action, sp, u.u12p, u.u1p2);
    half(lts, action, u.u12, t1, t2);
    half(lts, action, u.u1p2p, t1p, t2p);
    half(lts, action, u.u12p, t1, t2p);
    half(lts, action, u.u1p2, t1p, t2);
    return u;
}

int OneLetterAfa::index(const std::string& n) const
{
    auto it = std::find(states.begin(), states.end(), n);
    return it == states.end() ? -1 : static_cast<int>(it - states.begin());
}

OneLetterAfa parseAfa(const std::string& text)
{
    OneLetterAfa afa;
    std::istringstream is(text);
    std::string raw;
    int ln = 0;
    std::string initial;
    std::vector<std::string> acc;
    std::vector<std::pair<int, std::vector<std::string>>> eqs;
    bool sawStates = false;
    auto bad = [&](const std::string& m) { return Error(ErrorCode::Parse, "line " + std::to_string(ln) + ": " + m); };
    while (std::getline(is, raw)) {
        ++ln;
        auto h = raw.find('#');
        std::string line = h == std::string::npos ? raw : raw.substr(0, h);
        auto t = splitWs(line);
        if (t.empty())
            continue;
        auto colon = line.find(':');
        if (colon != std::string::npos) {
            auto key = splitWs(line.substr(0, colon));
            auto vals = splitWs(line.substr(colon + 1));
            if (key.size() != 1)
                throw bad("malformed header");
            if (key[0] == "afa-states") {
                afa.states = vals;
                sawStates = true;
            } else if (key[0] == "initial") {
                if (vals.size() != 1)
                    throw bad("initial takes one state");
                initial = vals[0];
            } else if (key[0] == "accepting") {
                acc = vals;
            } else {
                throw bad("unknown header '" + key[0] + "'");
            }
            continue;
        }
        if (t.size() != 5 || t[1] != "=" || (t[3] != "&" && t[3] != "|"))
            throw bad("transition lines look like 'q = q1 & q2' or 'q = q1 | q2'");
        eqs.emplace_back(ln, t);
    }
    if (!sawStates || initial.empty())
        throw Error(ErrorCode::Parse, "missing 'afa-states:' or 'initial:'");
    std::set<std::string> uniq(afa.states.begin(), afa.states.end());
    if (uniq.size() != afa.states.size() || afa.states.empty())
        throw Error(ErrorCode::Parse, "afa-states must be nonempty and distinct");
    auto need = [&](const std::string& n, int line) {
        int i = afa.index(n);
        if (i < 0)
            throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ": undeclared state '" + n + "'");
        return i;
    };
    afa.initial = need(initial, 0);
    afa.accepting.assign(afa.states.size(), 0);
    for (const auto& a : acc)
        afa.accepting[need(a, 0)] = 1;
    afa.delta.assign(afa.states.size(), {});
    std::vector<char> seen(afa.states.size(), 0);
    for (const auto& [line, t] : eqs) {
        int q = need(t[0], line);
        if (seen[q])
            throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ": transition of '" + t[0] + "' redefined");
        seen[q] = 1;
        afa.delta[q] = OneLetterAfa::Delta{t[3] == "&", need(t[2], line), need(t[4], line)};
    }
    for (std::size_t q = 0; q < seen.size(); ++q)
        if (!seen[q])
            throw Error(ErrorCode::Parse, "state '" + afa.states[q] + "' has no transition");
    return afa;
}

std::string renderAfa(const OneLetterAfa& afa)
{
    std::ostringstream os;
    os << "afa-states:";
    for (const auto& s : afa.states)
        os << " " << s;
    os << "\ninitial: " << afa.states[afa.initial] << "\naccepting:";
    for (std::size_t q = 0; q < afa.states.size(); ++q)
        if (afa.accepting[q])
            os << " " << afa.states[q];
    os << "\n";
    for (std::size_t q = 0; q < afa.states.size(); ++q) {
        const auto& d = afa.delta[q];
        os << afa.states[q] << " = " << afa.states[d.q1] << (d.conj ? " & " : " | ") << afa.states[d.q2] << "\n";
    }
    return os.str();
}

std::vector<std::vector<char>> accTable(const OneLetterAfa& afa, int n)
{
    std::size_t k = afa.states.size();
    std::vector<std::vector<char>> t(n + 1, std::vector<char>(k));
    for (std::size_t q = 0; q < k; ++q)
        t[0][q] = afa.accepting[q];
    for (int i = 1; i <= n; ++i)
        for (std::size_t q = 0; q < k; ++q) {
            const auto& d = afa.delta[q];
            t[i][q] = d.conj ? (t[i - 1][d.q1] && t[i - 1][d.q2]) : (t[i - 1][d.q1] || t[i - 1][d.q2]);
        }
    return t;
}

bool accOracle(const OneLetterAfa& afa, int q, int n)
{
    if (n < 0 || q < 0 || q >= static_cast<int>(afa.states.size()))
        throw Error(ErrorCode::Shape, "accOracle needs a declared state and n >= 0");
    return accTable(afa, n)[n][q];
}

AfaPoca afaToPoca(const OneLetterAfa& afa)
{
    AfaPoca out;
    Ppda& d = out.spec;
    int X = d.addSymbol("X"), Z = d.addSymbol("Z");
    int a = d.addAction("a");
    out.p = d.addState("p");
    out.pp = d.addState("p'");
    out.r = d.addState("r");
    for (const auto& s : afa.states)
        out.q.push_back(d.addState("q_" + s));
    for (const auto& s : afa.states)
        out.qp.push_back(d.addState("q_" + s + "'"));
    const Rational half = kHalf;
    auto T = [](int s, Word w) { return Target{s, std::move(w)}; };

    for (std::size_t i = 0; i < afa.states.size(); ++i)
        if (afa.accepting[i])
            d.addRule(out.q[i], Z, a, {{T(out.r, {Z}), Rational(1)}});

    int s1 = -1, s2 = -1;
    for (std::size_t i = 0; i < afa.states.size(); ++i) {
        const auto& dl = afa.delta[i];
        const std::string& n = afa.states[i];
        int q = out.q[i], qp = out.qp[i];
        int q1 = out.q[dl.q1], q2 = out.q[dl.q2], q1p = out.qp[dl.q1], q2p = out.qp[dl.q2];
        if (!dl.conj) {
            if (s1 < 0) {
                s1 = d.addState("s1");
                s2 = d.addState("s2");
                d.addRule(s1, X, a, {{T(s1, {X}), half}, {T(out.r, {}), half}});
                d.addRule(s2, X, a, {{T(s2, {X}), Rational::parse("2/5")}, {T(out.r, {}), Rational::parse("3/5")}});
            }
            int r1 = d.addState("r1_" + n), r2 = d.addState("r2_" + n);
            int r1p = d.addState("r1_" + n + "'"), r2p = d.addState("r2_" + n + "'");
            d.addRule(q, X, a, {{T(r1, {X}), half}, {T(r2, {X}), half}});
            d.addRule(qp, X, a, {{T(r1p, {X}), half}, {T(r2p, {X}), half}});
            d.addRule(r1, X, a, {{T(q1, {}), half}, {T(s1, {X}), half}});
            d.addRule(r2, X, a, {{T(q2, {}), half}, {T(s2, {X}), half}});
            d.addRule(r1p, X, a, {{T(q1p, {}), half}, {T(s1, {X}), half}});
            d.addRule(r2p, X, a, {{T(q2p, {}), half}, {T(s2, {X}), half}});
        } else {
            int u12 = d.addState("u12_" + n), u1p2p = d.addState("u1'2'_" + n);
            int u12p = d.addState("u12'_" + n), u1p2 = d.addState("u1'2_" + n);
            d.addRule(q, X, a, {{T(u12, {X}), half}, {T(u1p2p, {X}), half}});
            d.addRule(qp, X, a, {{T(u12p, {X}), half}, {T(u1p2, {X}), half}});
            d.addRule(u12, X, a, {{T(q1, {}), half}, {T(q2, {}), half}});
            d.addRule(u1p2p, X, a, {{T(q1p, {}), half}, {T(q2p, {}), half}});
            d.addRule(u12p, X, a, {{T(q1, {}), half}, {T(q2p, {}), half}});
            d.addRule(u1p2, X, a, {{T(q1p, {}), half}, {T(q2, {}), half}});
        }
    }
    Rational third = Rational::parse("1/3");
    int q0 = out.q[afa.initial], q0p = out.qp[afa.initial];
    d.addRule(out.p, X, a, {{T(out.p, {X, X}), third}, {T(q0, {}), third}, {T(out.r, {X}), third}});
    d.addRule(out.pp, X, a, {{T(out.pp, {X, X}), third}, {T(q0p, {}), third}, {T(out.r, {X}), third}});
    return out;
}

std::vector<std::vector<char>> afaPocaBisimTable(const AfaPoca& poca, int nMax, int* rounds)
{
    std::vector<Configuration> roots;
    for (int n = 0; n <= nMax; ++n)
        for (std::size_t i = 0; i < poca.q.size(); ++i) {
            roots.push_back(ocaConfig(poca.spec, poca.q[i], n));
            roots.push_back(ocaConfig(poca.spec, poca.qp[i], n));
        }
    Ball ball = unfoldClosed(poca.spec, roots);
    auto st = stablePartition(ball.lts);
    if (rounds)
        *rounds = st.rounds;
    std::vector<std::vector<char>> t(nMax + 1, std::vector<char>(poca.q.size()));
    for (int n = 0; n <= nMax; ++n)
        for (std::size_t i = 0; i < poca.q.size(); ++i)
            t[n][i] = st.partition.same(ball.indexOf(ocaConfig(poca.spec, poca.q[i], n)),
                                        ball.indexOf(ocaConfig(poca.spec, poca.qp[i], n)));
    return t;
}

std::vector<OneLetterAfa> enumerateAfas(int nStates)
{
    std::vector<OneLetterAfa::Delta> choices;
    for (int c = 0; c < 2; ++c)
        for (int a = 0; a < nStates; ++a)
            for (int b = 0; b < nStates; ++b)
                choices.push_back({c == 1, a, b});
    std::vector<OneLetterAfa> out;
    long total = 1;
    for (int i = 0; i < nStates; ++i)
        total *= static_cast<long>(choices.size());
    for (long code = 0; code < total; ++code)
        for (int f = 0; f < (1 << nStates); ++f) {
            OneLetterAfa afa;
            for (int i = 0; i < nStates; ++i)
                afa.states.push_back("q" + std::to_string(i));
            afa.initial = 0;
            long c = code;
            for (int i = 0; i < nStates; ++i) {
                afa.delta.push_back(choices[c % choices.size()]);
                c /= static_cast<long>(choices.size());
                afa.accepting.push_back(static_cast<char>(f >> i & 1));
            }
            out.push_back(std::move(afa));
        }
    return out;
}

PushdownGame parseGame(const std::string& text)
{
    auto pr = parsePpda(text);
    if (!pr.issues.empty())
        throw Error(ErrorCode::Unvalidated, pr.issues.front().message);
    PushdownGame g;
    g.spec = std::move(pr.spec);
    g.owner.assign(g.spec.states.size(), -1);
    for (int who = 0; who < 2; ++who) {
        auto it = pr.extraHeaders.find(who == 0 ? "owner0" : "owner1");
        if (it == pr.extraHeaders.end())
            continue;
        for (const auto& n : it->second) {
            int s = g.spec.stateIndex(n);
            if (s < 0)
                throw Error(ErrorCode::Parse, "owner list names undeclared state '" + n + "'");
            if (g.owner[s] >= 0)
                throw Error(ErrorCode::Parse, "state '" + n + "' listed for both players");
            g.owner[s] = who;
        }
    }
    for (std::size_t s = 0; s < g.owner.size(); ++s)
        if (g.owner[s] < 0)
            throw Error(ErrorCode::Parse, "state '" + g.spec.states[s] + "' has no owner");
    auto it = pr.extraHeaders.find("initial");
    if (it == pr.extraHeaders.end() || it->second.size() != 2)
        throw Error(ErrorCode::Parse, "game files need 'initial: p0 X0'");
    g.p0 = g.spec.stateIndex(it->second[0]);
    g.x0 = g.spec.symbolIndex(it->second[1]);
    if (g.p0 < 0 || g.x0 < 0)
        throw Error(ErrorCode::Parse, "initial head names undeclared state or symbol");
    for (const auto& [k, v] : pr.extraHeaders)
        if (k != "owner0" && k != "owner1" && k != "initial")
            throw Error(ErrorCode::Parse, "unknown header '" + k + "'");
    validateGame(g);
    return g;
}

std::string renderGame(const PushdownGame& g)
{
    std::ostringstream os;
    os << renderPpda(g.spec);
    for (int who = 0; who < 2; ++who) {
        os << "owner" << who << ":";
        for (std::size_t s = 0; s < g.owner.size(); ++s)
            if (g.owner[s] == who)
                os << " " << g.spec.states[s];
        os << "\n";
    }
    os << "initial: " << g.spec.states[g.p0] << " " << g.spec.stack[g.x0] << "\n";
    return os.str();
}

namespace {

std::vector<Target> gameSuccessors(const PushdownGame& g, const HeadIndex& idx, int p, int x)
{
    std::set<Target> s;
    for (int ri : idx.rules(p, x))
        s.insert(g.spec.rules[ri].dist.entries().front().first);
    return {s.begin(), s.end()};
}

} // namespace

void validateGame(const PushdownGame& g)
{
    auto rep = validate(g.spec);
    if (!rep.empty())
        throw Error(ErrorCode::Unvalidated, rep.front().message);
    if (g.spec.actions.size() != 1)
        throw Error(ErrorCode::Shape, "games use a single action");
    if (!isDiracOnly(g.spec))
        throw Error(ErrorCode::Shape, "game rules must be Dirac");
    if (g.owner.size() != g.spec.states.size())
        throw Error(ErrorCode::Shape, "every control state needs an owner");
    HeadIndex idx(g.spec);
    for (int p = 0; p < static_cast<int>(g.spec.states.size()); ++p)
        for (int x = 0; x < static_cast<int>(g.spec.stack.size()); ++x) {
            auto succ = gameSuccessors(g, idx, p, x);
            std::string head = g.spec.states[p] + g.spec.stack[x];
            if (succ.size() > 2)
                throw Error(ErrorCode::Shape, "head " + head + " has more than two successors");
            if (succ.size() == 2 && (succ[0].push.size() != 1 || succ[1].push.size() != 1))
                throw Error(ErrorCode::Shape, "head " + head + " branches into pushes of length other than one");
        }
}

const char* gameWinnerName(GameWinner w)
{
    switch (w) {
    case GameWinner::Player0: return "PLAYER0_WINS";
    case GameWinner::Player1: return "PLAYER1_WINS";
    case GameWinner::Unresolved: return "UNRESOLVED";
    }
    return "?";
}

GameSolution solveGameBounded(const PushdownGame& g, int depthBound, std::size_t cap)
{
    validateGame(g);
    HeadIndex idx(g.spec);
    std::vector<Configuration> cfgs;
    std::unordered_map<Configuration, int, ConfigurationHash> ids;
    std::vector<std::vector<int>> succ;
    std::vector<char> expanded;
    auto intern = [&](const Configuration& c) {
        auto [it, fresh] = ids.emplace(c, static_cast<int>(cfgs.size()));
        if (fresh) {
            cfgs.push_back(c);
            succ.emplace_back();
            expanded.push_back(0);
        }
        return it->second;
    };
    intern(Configuration{g.p0, {g.x0}});
    std::deque<int> work{0};
    bool finite = true;
    while (!work.empty()) {
        int v = work.front();
        work.pop_front();
        if (cfgs.size() > cap) {
            finite = false;
            break;
        }
        expanded[v] = 1;
        Configuration c = cfgs[v];
        if (c.stack.empty())
            continue;
        for (const Target& t : gameSuccessors(g, idx, c.state, c.stack[0])) {
            Configuration n;
            n.state = t.state;
            n.stack = t.push;
            n.stack.insert(n.stack.end(), c.stack.begin() + 1, c.stack.end());
            std::size_t before = cfgs.size();
            int id = intern(n);
            succ[v].push_back(id);
            if (cfgs.size() > before)
                work.push_back(id);
        }
    }
    int n = static_cast<int>(cfgs.size());
    std::vector<std::vector<int>> pred(n);
    std::vector<int> pending(n, 0), rank(n, -1);
    std::deque<int> q;
    for (int v = 0; v < n; ++v) {
        if (!expanded[v])
            continue;
        std::sort(succ[v].begin(), succ[v].end());
        succ[v].erase(std::unique(succ[v].begin(), succ[v].end()), succ[v].end());
        for (int w : succ[v])
            pred[w].push_back(v);
        pending[v] = static_cast<int>(succ[v].size());
        if (succ[v].empty()) {
            rank[v] = 0;
            q.push_back(v);
        }
    }
    while (!q.empty()) {
        int w = q.front();
        q.pop_front();
        for (int v : pred[w]) {
            if (rank[v] >= 0)
                continue;
            int who = g.owner[cfgs[v].state];
            if (who == 1 || --pending[v] == 0) {
                rank[v] = rank[w] + 1;
                q.push_back(v);
            }
        }
    }
    GameSolution sol;
    sol.finite = finite;
    sol.explored = n;
    sol.rank = rank[0];
    if (finite)
        sol.winner = rank[0] >= 0 ? GameWinner::Player1 : GameWinner::Player0;
    else
        sol.winner = rank[0] >= 0 && rank[0] <= depthBound ? GameWinner::Player1 : GameWinner::Unresolved;
    return sol;
}

GamePvpda gameToPvpda(const PushdownGame& g)
{
    validateGame(g);
    const Ppda& src = g.spec;
    GamePvpda out;
    Ppda& d = out.spec;
    d.stack = src.stack;
    int ar = d.addAction("a_r", ActionClass::Return);
    int ai = d.addAction("a_int", ActionClass::Internal);
    int ac = d.addAction("a_c", ActionClass::Call);
    int nq = static_cast<int>(src.states.size());
    std::vector<int> base(nq), prime(nq);
    for (int p = 0; p < nq; ++p)
        base[p] = d.addState(src.states[p]);
    for (int p = 0; p < nq; ++p) {
        if (d.stateIndex(src.states[p] + "'") >= 0)
            throw Error(ErrorCode::Shape, "state name '" + src.states[p] + "'' clashes with a primed copy");
        prime[p] = d.addState(src.states[p] + "'");
    }
    if (d.stateIndex("z") >= 0)
        throw Error(ErrorCode::Shape, "state name 'z' is reserved");
    int z = d.addState("z");

    std::set<std::tuple<int, int, int>> heads;
    auto rule = [&](int s, int x, int a, std::vector<std::pair<Target, Rational>> alts) {
        if (heads.insert({s, x, a}).second)
            d.addRule(s, x, a, std::move(alts));
    };
    auto actFor = [&](std::size_t len) { return len == 0 ? ar : len == 1 ? ai : ac; };
    auto name = [&](int s, bool primed) { return src.states[s] + (primed ? "'" : ""); };
    auto fresh = [&](const std::string& n) {
        int s = d.stateIndex(n);
        return s >= 0 ? s : d.addState(n);
    };
    HeadIndex idx(src);
    for (int p = 0; p < nq; ++p)
        for (int x = 0; x < static_cast<int>(src.stack.size()); ++x) {
            auto succ = gameSuccessors(g, idx, p, x);
            if (succ.empty()) {
                rule(base[p], x, ai, {{Target{base[p], {x}}, Rational(1)}});
                rule(prime[p], x, ai, {{Target{z, {x}}, Rational(1)}});
            } else if (succ.size() == 1) {
                const Target& t = succ[0];
                int a = actFor(t.push.size());
                rule(base[p], x, a, {{Target{base[t.state], t.push}, Rational(1)}});
                rule(prime[p], x, a, {{Target{prime[t.state], t.push}, Rational(1)}});
            } else {
                int p1 = succ[0].state, x1 = succ[0].push[0], p2 = succ[1].state, x2 = succ[1].push[0];
                auto T = [&](int s, int y) { return Target{s, {y}}; };
                auto half = kHalf;
                auto nm = [&](int s, bool pr, int y) { return name(s, pr) + ":" + src.stack[y]; };
                if (g.owner[p] == 0) {
                    auto tag = [&](bool a1, bool a2) { return "(" + nm(p1, a1, x1) + "," + nm(p2, a2, x2) + ")"; };
                    int u12 = fresh(tag(false, false)), u1p2p = fresh(tag(true, true));
                    int u12p = fresh(tag(false, true)), u1p2 = fresh(tag(true, false));
                    rule(base[p], x, ai, {{T(u12, x), half}, {T(u1p2p, x), half}});
                    rule(prime[p], x, ai, {{T(u12p, x), half}, {T(u1p2, x), half}});
                    rule(u12, x, ai, {{T(base[p1], x1), half}, {T(base[p2], x2), half}});
                    rule(u1p2p, x, ai, {{T(prime[p1], x1), half}, {T(prime[p2], x2), half}});
                    rule(u12p, x, ai, {{T(base[p1], x1), half}, {T(prime[p2], x2), half}});
                    rule(u1p2, x, ai, {{T(prime[p1], x1), half}, {T(base[p2], x2), half}});
                } else {
                    int v1 = fresh("(1:" + nm(p1, false, x1) + ")"), v1p = fresh("(1:" + nm(p1, true, x1) + ")");
                    int v2 = fresh("(2:" + nm(p2, false, x2) + ")"), v2p = fresh("(2:" + nm(p2, true, x2) + ")");
                    rule(base[p], x, ai, {{T(v1, x), half}, {T(v2, x), half}});
                    rule(prime[p], x, ai, {{T(v1p, x), half}, {T(v2p, x), half}});
                    rule(v1, x, ai, {{T(base[p1], x1), Rational(1)}});
                    rule(v1p, x, ai, {{T(prime[p1], x1), Rational(1)}});
                    rule(v2, x, ai, {{T(base[p2], x2), half}, {T(z, x), half}});
                    rule(v2p, x, ai, {{T(prime[p2], x2), half}, {T(z, x), half}});
                }
            }
        }
    out.left = Configuration{base[g.p0], {g.x0}};
    out.right = Configuration{prime[g.p0], {g.x0}};
    return out;
}

Ppda nondeterminise(const Ppda& spec)
{
    Ppda d = spec;
    d.rules.clear();
    for (const Rule& r : spec.rules)
        for (const auto& [t, w] : r.dist.entries()) {
            (void)w;
            d.addRule(r.state, r.symbol, r.action, {{t, Rational(1)}});
        }
    return d;
}

} // namespace ppda
