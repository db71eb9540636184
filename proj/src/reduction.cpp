#include "ppda/reduction.hh"

#include "ppda/error.hh"

#include <algorithm>
#include <set>

namespace ppda {

bool WeightSet::contains(const Rational& w) const
{
    return std::binary_search(weights.begin(), weights.end(), w);
}

static void checkSupport(const Ppda& spec, int cap)
{
    for (std::size_t i = 0; i < spec.rules.size(); ++i)
        if (static_cast<int>(spec.rules[i].dist.size()) > cap)
            throw Error(ErrorCode::SupportTooLarge, "rule " + std::to_string(i) + " has support " +
                                                        std::to_string(spec.rules[i].dist.size()) + " > " +
                                                        std::to_string(cap));
}

WeightSet computeWeights(const Ppda& spec, int supportCap)
{
    checkSupport(spec, supportCap);
    std::set<Rational> s;
    for (const Rule& r : spec.rules) {
        unsigned long full = 1UL << r.dist.size();
        for (unsigned long mask = 1; mask < full; ++mask)
            s.insert(r.dist.massOfMask(mask));
    }
    WeightSet ws;
    ws.weights.assign(s.begin(), s.end());
    return ws;
}

static int freshAction(Ppda& p, const std::string& name, std::optional<ActionClass> cls)
{
    if (p.actionIndex(name) >= 0)
        throw Error(ErrorCode::Shape, "action name '" + name + "' already used by the source automaton");
    return p.addAction(name, cls);
}

static ReducedPda build(const Ppda& spec, int supportCap, bool visibly)
{
    {
        auto rep = validate(spec);
        if (!rep.empty())
            throw Error(ErrorCode::Unvalidated, rep.front().message);
    }
    if (visibly && !visiblyShape(spec))
        throw Error(ErrorCode::NotVisibly, "source automaton is not visibly pushdown");
    ReducedPda red;
    red.visibly = visibly;
    red.weights = computeWeights(spec, supportCap);
    Ppda& out = red.spec;
    out.states = spec.states;
    out.stack = spec.stack;
    out.actions = spec.actions;
    if (visibly)
        out.visibility = std::vector<ActionClass>(spec.actions.size(), ActionClass::Internal);
    red.baseSymbols = static_cast<int>(spec.stack.size());
    red.baseActions = static_cast<int>(spec.actions.size());

    auto inClass = [&](ActionClass c) -> std::optional<ActionClass> {
        if (visibly)
            return c;
        return std::nullopt;
    };
    for (const auto& w : red.weights.weights)
        red.weightAction.push_back(freshAction(out, w.str(), inClass(ActionClass::Internal)));
    if (visibly) {
        red.hashR = freshAction(out, "#r", ActionClass::Return);
        red.hashInt = freshAction(out, "#int", ActionClass::Internal);
        red.hashC = freshAction(out, "#c", ActionClass::Call);
    } else {
        red.hashAction = freshAction(out, "#", std::nullopt);
    }

    auto newSymbol = [&](const std::string& name, SymbolOrigin o) {
        if (out.symbolIndex(name) >= 0)
            throw Error(ErrorCode::Shape, "stack symbol '" + name + "' already used by the source automaton");
        red.origin.push_back(o);
        return out.addSymbol(name);
    };
    for (std::size_t i = 0; i < spec.rules.size(); ++i) {
        const Rule& r = spec.rules[i];
        std::string base = "<d" + std::to_string(i);
        red.distSymbol.push_back(newSymbol(base + ">", {static_cast<int>(i), 0}));
        std::vector<int> subs(1UL << r.dist.size(), -1);
        for (unsigned long mask = 1; mask < subs.size(); ++mask)
            subs[mask] = newSymbol(base + ":" + std::to_string(mask) + ">", {static_cast<int>(i), mask});
        red.subsetSymbol.push_back(std::move(subs));
    }

    auto dirac = [](int q, Word w) { return std::vector<std::pair<Target, Rational>>{{Target{q, std::move(w)}, Rational(1)}}; };
    for (std::size_t i = 0; i < spec.rules.size(); ++i) {
        const Rule& r = spec.rules[i];
        out.addRule(r.state, r.symbol, r.action, dirac(r.state, {red.distSymbol[i]}));
    }
    for (std::size_t i = 0; i < spec.rules.size(); ++i) {
        const Rule& r = spec.rules[i];
        for (unsigned long mask = 1; mask < red.subsetSymbol[i].size(); ++mask) {
            Rational mass = r.dist.massOfMask(mask);
            for (std::size_t wi = 0; wi < red.weights.weights.size(); ++wi)
                if (red.weights.weights[wi] <= mass)
                    out.addRule(r.state, red.distSymbol[i], red.weightAction[wi],
                                dirac(r.state, {red.subsetSymbol[i][mask]}));
        }
    }
    for (std::size_t i = 0; i < spec.rules.size(); ++i) {
        const Rule& r = spec.rules[i];
        const auto& ents = r.dist.entries();
        for (unsigned long mask = 1; mask < red.subsetSymbol[i].size(); ++mask)
            for (std::size_t e = 0; e < ents.size(); ++e) {
                if (!(mask >> e & 1UL))
                    continue;
                const Target& t = ents[e].first;
                int act = red.hashAction;
                if (visibly)
                    act = t.push.empty() ? red.hashR : t.push.size() == 1 ? red.hashInt : red.hashC;
                out.addRule(r.state, red.subsetSymbol[i][mask], act, dirac(t.state, t.push));
            }
    }
    return red;
}

ReducedPda buildReduced(const Ppda& spec, int supportCap) { return build(spec, supportCap, false); }
ReducedPda buildReducedVisibly(const Ppda& spec, int supportCap) { return build(spec, supportCap, true); }

bool crossValidate(const Ppda& spec, const ReducedPda& red, const Configuration& c1, const Configuration& c2, int n,
                   std::size_t cap)
{
    if (c1.stack.empty() || c2.stack.empty())
        throw Error(ErrorCode::Shape, "cross validation needs nonempty stacks");
    auto a = bisimDepth(spec, c1, c2, n, cap);
    auto b = bisimDepth(red.spec, c1, c2, 3 * n, cap);
    return a.equivalent == b.equivalent;
}

bool crossValidate(const Ppda& spec, const Configuration& c1, const Configuration& c2, int n, std::size_t cap)
{
    return crossValidate(spec, buildReduced(spec), c1, c2, n, cap);
}

SizeStats sizeStats(const Ppda& source, const ReducedPda& red)
{
    SizeStats s;
    s.gamma = source.stack.size();
    s.gammaPrime = red.spec.stack.size();
    s.sigma = source.actions.size();
    s.sigmaPrime = red.spec.actions.size();
    s.rho = source.rules.size();
    for (const Rule& r : source.rules)
        s.m = std::max(s.m, r.dist.size());
    s.w = red.weights.weights.size();
    s.hashActions = red.visibly ? 3 : 1;
    std::vector<std::size_t> perWeight(red.spec.actions.size(), 0);
    for (const Rule& r : red.spec.rules) {
        if (r.action < red.baseActions)
            ++s.rulesUnderSigma;
        else if (red.isHash(r.action))
            ++s.rulesUnderHash;
        else {
            ++s.rulesUnderWeight;
            ++perWeight[r.action];
        }
    }
    for (auto c : perWeight)
        s.rulesUnderWeightMax = std::max(s.rulesUnderWeightMax, c);
    return s;
}

bool SizeStats::withinBounds(std::vector<std::string>* why) const
{
    std::size_t pow = std::size_t(1) << m;
    bool ok = true;
    auto check = [&](bool c, const std::string& what) {
        if (!c) {
            ok = false;
            if (why)
                why->push_back(what);
        }
    };
    check(gammaPrime <= gamma + rho + rho * pow, "|Gamma'| exceeds |Gamma| + |rho| + |rho| 2^m");
    check(sigmaPrime <= sigma + w + hashActions, "|Sigma'| exceeds |Sigma| + |W| + #-actions");
    check(rulesUnderSigma <= rho, "rules under source actions exceed |rho|");
    check(rulesUnderWeightMax <= rho * pow, "rules under one weight exceed |rho| 2^m");
    check(w <= rho * pow, "|W| exceeds |rho| 2^m");
    check(rulesUnderHash <= rho * pow * m, "#-rules exceed |rho| 2^m m");
    return ok;
}

} // namespace ppda
