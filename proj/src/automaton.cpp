#include "ppda/automaton.hh"

#include "ppda/error.hh"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace ppda {

const char* actionClassName(ActionClass c)
{
    switch (c) {
    case ActionClass::Return: return "r";
    case ActionClass::Internal: return "int";
    case ActionClass::Call: return "c";
    }
    return "?";
}

int pushLengthOf(ActionClass c)
{
    switch (c) {
    case ActionClass::Return: return 0;
    case ActionClass::Internal: return 1;
    case ActionClass::Call: return 2;
    }
    return -1;
}

static int indexIn(const std::vector<std::string>& v, const std::string& n)
{
    auto it = std::find(v.begin(), v.end(), n);
    return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

int Ppda::stateIndex(const std::string& n) const { return indexIn(states, n); }
int Ppda::symbolIndex(const std::string& n) const { return indexIn(stack, n); }
int Ppda::actionIndex(const std::string& n) const { return indexIn(actions, n); }

int Ppda::addState(const std::string& n)
{
    int i = stateIndex(n);
    if (i >= 0)
        return i;
    states.push_back(n);
    return static_cast<int>(states.size()) - 1;
}

int Ppda::addSymbol(const std::string& n)
{
    int i = symbolIndex(n);
    if (i >= 0)
        return i;
    stack.push_back(n);
    return static_cast<int>(stack.size()) - 1;
}

int Ppda::addAction(const std::string& n, std::optional<ActionClass> cls)
{
    int i = actionIndex(n);
    if (i >= 0)
        return i;
    actions.push_back(n);
    if (cls) {
        if (!visibility)
            visibility.emplace(actions.size() - 1, ActionClass::Internal);
        visibility->push_back(*cls);
    } else if (visibility) {
        visibility->push_back(ActionClass::Internal);
    }
    return static_cast<int>(actions.size()) - 1;
}

void Ppda::addRule(int q, int x, int a, std::vector<std::pair<Target, Rational>> alts)
{
    Rule r;
    r.state = q;
    r.symbol = x;
    r.action = a;
    r.dist = Distribution<Target>(std::move(alts));
    rules.push_back(std::move(r));
}

std::size_t ConfigurationHash::operator()(const Configuration& c) const
{
    std::size_t h = static_cast<std::size_t>(c.state) * 0x9e3779b97f4a7c15ULL;
    for (int s : c.stack)
        h = (h ^ static_cast<std::size_t>(s + 1)) * 0x100000001b3ULL;
    return h ^ (c.stack.size() << 1);
}

HeadIndex::HeadIndex(const Ppda& spec)
    : width_(spec.stack.size()), byHead_(spec.states.size() * spec.stack.size())
{
    for (std::size_t i = 0; i < spec.rules.size(); ++i) {
        const Rule& r = spec.rules[i];
        if (r.state < 0 || r.symbol < 0 || r.state >= static_cast<int>(spec.states.size()) ||
            r.symbol >= static_cast<int>(spec.stack.size()))
            continue;
        byHead_[static_cast<std::size_t>(r.state) * width_ + r.symbol].push_back(static_cast<int>(i));
    }
}

ValidationReport validate(const Ppda& spec)
{
    ValidationReport rep;
    auto nq = static_cast<int>(spec.states.size());
    auto ng = static_cast<int>(spec.stack.size());
    auto ns = static_cast<int>(spec.actions.size());

    auto dupCheck = [&](const std::vector<std::string>& v, const char* what) {
        std::set<std::string> seen;
        for (const auto& n : v)
            if (!seen.insert(n).second)
                rep.push_back({-1, 0, std::string("duplicate ") + what + " '" + n + "'"});
    };
    dupCheck(spec.states, "state");
    dupCheck(spec.stack, "stack symbol");
    dupCheck(spec.actions, "action");
    if (spec.visibility && spec.visibility->size() != spec.actions.size())
        rep.push_back({-1, 0, "visibility partition does not cover every action exactly once"});

    for (std::size_t i = 0; i < spec.rules.size(); ++i) {
        const Rule& r = spec.rules[i];
        int ri = static_cast<int>(i);
        auto at = [&](const std::string& m) { rep.push_back({ri, r.line, m}); };
        if (r.state < 0 || r.state >= nq)
            at("undeclared control state on left-hand side");
        if (r.symbol < 0 || r.symbol >= ng)
            at("undeclared stack symbol on left-hand side");
        if (r.action < 0 || r.action >= ns)
            at("undeclared action");
        if (r.dist.empty()) {
            at("empty distribution");
            continue;
        }
        for (const auto& [t, w] : r.dist.entries()) {
            if (t.state < 0 || t.state >= nq)
                at("undeclared control state in successor");
            for (int s : t.push)
                if (s < 0 || s >= ng) {
                    at("undeclared stack symbol in successor");
                    break;
                }
            if (t.push.size() > 2)
                at("successor pushes " + std::to_string(t.push.size()) + " symbols (at most 2 allowed)");
            if (!(w > Rational(0)))
                at("non-positive probability " + w.str());
        }
        Rational tot = r.dist.total();
        if (!tot.isOne())
            at("probabilities sum to " + tot.str() + " instead of 1");
    }
    return rep;
}

static void requireValid(const Ppda& spec)
{
    auto rep = validate(spec);
    if (!rep.empty())
        throw Error(ErrorCode::Unvalidated, rep.front().message);
}

bool isDiracOnly(const Ppda& spec)
{
    return std::all_of(spec.rules.begin(), spec.rules.end(), [](const Rule& r) { return r.dist.isDirac(); });
}

bool isFullyProbabilistic(const Ppda& spec)
{
    std::set<std::tuple<int, int, int>> heads;
    for (const Rule& r : spec.rules)
        if (!heads.insert({r.state, r.symbol, r.action}).second)
            return false;
    return true;
}

bool pocaShape(const Ppda& spec, std::string* reason)
{
    auto fail = [&](const std::string& m) {
        if (reason)
            *reason = m;
        return false;
    };
    if (spec.stack.size() != 2)
        return fail("stack alphabet must be exactly {X, Z}");
    int x = spec.symbolIndex("X"), z = spec.symbolIndex("Z");
    if (x < 0 || z < 0)
        return fail("stack alphabet must be exactly {X, Z}");
    for (std::size_t i = 0; i < spec.rules.size(); ++i) {
        const Rule& r = spec.rules[i];
        for (const auto& [t, w] : r.dist.entries()) {
            (void)w;
            if (r.symbol == x) {
                if (std::find(t.push.begin(), t.push.end(), z) != t.push.end())
                    return fail("rule " + std::to_string(i) + " pushes Z from an X head");
            } else {
                bool ok = (t.push == Word{z}) || (t.push == Word{x, z});
                if (!ok)
                    return fail("rule " + std::to_string(i) + " on a Z head must push Z or XZ");
            }
        }
    }
    return true;
}

bool visiblyShape(const Ppda& spec, std::string* reason)
{
    if (!spec.visibility) {
        if (reason)
            *reason = "no visibility partition";
        return false;
    }
    for (std::size_t i = 0; i < spec.rules.size(); ++i) {
        const Rule& r = spec.rules[i];
        int want = pushLengthOf((*spec.visibility)[r.action]);
        for (const auto& [t, w] : r.dist.entries()) {
            (void)w;
            if (static_cast<int>(t.push.size()) != want) {
                if (reason)
                    *reason = "rule " + std::to_string(i) + " under " + actionClassName((*spec.visibility)[r.action]) +
                              "-action '" + spec.actions[r.action] + "' pushes " + std::to_string(t.push.size()) +
                              " symbols";
                return false;
            }
        }
    }
    return true;
}

SubclassSet classify(const Ppda& spec)
{
    requireValid(spec);
    SubclassSet s;
    s.pBPA = spec.states.size() == 1;
    s.pOCA = pocaShape(spec);
    s.pvPDA = visiblyShape(spec);
    s.fullyProbabilistic = isFullyProbabilistic(spec);
    s.diracOnly = isDiracOnly(spec);
    return s;
}

std::vector<std::string> SubclassSet::names() const
{
    std::vector<std::string> v;
    if (pBPA)
        v.push_back("pBPA");
    if (pOCA)
        v.push_back("pOCA");
    if (pvPDA)
        v.push_back("pvPDA");
    if (fullyProbabilistic)
        v.push_back("fullyProbabilistic");
    if (diracOnly)
        v.push_back("nondeterministic-only");
    return v;
}

std::string renderConfiguration(const Ppda& spec, const Configuration& c)
{
    std::string s = spec.states.at(c.state);
    for (int x : c.stack)
        s += spec.stack.at(x);
    return s;
}

std::string renderTarget(const Ppda& spec, const Target& t)
{
    return renderConfiguration(spec, Configuration{t.state, t.push});
}

} // namespace ppda
