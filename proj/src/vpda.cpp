#include "ppda/vpda.hh"

#include "ppda/error.hh"

#include <algorithm>
#include <sstream>

namespace ppda {

PairSet::PairSet(std::vector<Code> elems) : e_(std::move(elems))
{
    std::sort(e_.begin(), e_.end());
    e_.erase(std::unique(e_.begin(), e_.end()), e_.end());
}

bool PairSet::contains(Code c) const { return std::binary_search(e_.begin(), e_.end(), c); }

bool PairSet::subsetOf(const PairSet& b) const
{
    return e_.size() <= b.e_.size() && std::includes(b.e_.begin(), b.e_.end(), e_.begin(), e_.end());
}

PairSet PairSet::unite(const PairSet& b) const
{
    PairSet r;
    r.e_.reserve(e_.size() + b.e_.size());
    std::set_union(e_.begin(), e_.end(), b.e_.begin(), b.e_.end(), std::back_inserter(r.e_));
    return r;
}

void PairSet::insert(Code c)
{
    auto it = std::lower_bound(e_.begin(), e_.end(), c);
    if (it == e_.end() || *it != c)
        e_.insert(it, c);
}

bool Antichain::insert(const PairSet& s, const Annotation& a)
{
    for (const auto& m : m_)
        if (m.set.subsetOf(s))
            return false;
    m_.erase(std::remove_if(m_.begin(), m_.end(), [&](const Member& m) { return s.subsetOf(m.set); }), m_.end());
    auto it = std::lower_bound(m_.begin(), m_.end(), s, [](const Member& m, const PairSet& k) { return m.set < k; });
    m_.insert(it, Member{s, a});
    return true;
}

bool Antichain::covers(const PairSet& a) const
{
    return std::any_of(m_.begin(), m_.end(), [&](const Member& m) { return m.set.subsetOf(a); });
}

bool Antichain::wellFormed() const
{
    for (std::size_t i = 0; i < m_.size(); ++i)
        for (std::size_t j = 0; j < m_.size(); ++j)
            if (i != j && m_[i].set.subsetOf(m_[j].set))
                return false;
    return true;
}

Code PairShape::sideCount() const
{
    Code c = states;
    for (int i = 0; i < length; ++i)
        c *= symbols;
    return c;
}

Code PairShape::side(int p, const Word& w) const
{
    Code c = p;
    for (int x : w)
        c = c * symbols + x;
    return c;
}

void PairShape::decodeSide(Code c, int* p, Word* w) const
{
    w->assign(length, 0);
    for (int i = length - 1; i >= 0; --i) {
        (*w)[i] = static_cast<int>(c % symbols);
        c /= symbols;
    }
    *p = static_cast<int>(c);
}

void PairShape::decodePair(Code c, Code* left, Code* right) const
{
    *left = c / sideCount();
    *right = c % sideCount();
}

bool ForcingRelation::holds(Code h, const PairSet& a) const
{
    auto it = entries.find(h);
    return it != entries.end() && it->second.covers(a);
}

void ForcingRelation::add(Code h, const PairSet& s, const Annotation& ann) { entries[h].insert(s, ann); }

std::size_t ForcingRelation::memberCount() const
{
    std::size_t n = 0;
    for (const auto& [h, ac] : entries)
        n += ac.size();
    return n;
}

bool ForcingRelation::antichainInvariant() const
{
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.second.wellFormed(); });
}

bool ForcingRelation::includedIn(const ForcingRelation& b) const
{
    for (const auto& [h, ac] : entries)
        for (const auto& m : ac.members())
            if (!b.holds(h, m.set))
                return false;
    return true;
}

bool operator==(const ForcingRelation& a, const ForcingRelation& b)
{
    if (a.entries.size() != b.entries.size())
        return false;
    for (auto ia = a.entries.begin(), ib = b.entries.begin(); ia != a.entries.end(); ++ia, ++ib) {
        if (ia->first != ib->first || ia->second.size() != ib->second.size())
            return false;
        for (std::size_t i = 0; i < ia->second.size(); ++i)
            if (!(ia->second.members()[i].set == ib->second.members()[i].set))
                return false;
    }
    return true;
}

ForcingRelation liftJoin(const ForcingRelation& f, const ForcingRelation& g)
{
    ForcingRelation r;
    r.dom = f.dom;
    r.cod = g.cod;
    for (const auto& [h, ac] : f.entries)
        for (const auto& m : ac.members()) {
            Antichain cur;
            cur.insert(PairSet{});
            for (Code v : m.set.elems()) {
                auto it = g.entries.find(v);
                if (it == g.entries.end()) {
                    cur = Antichain{};
                    break;
                }
                Antichain next;
                for (const auto& s : cur.members())
                    for (const auto& b : it->second.members())
                        next.insert(s.set.unite(b.set));
                cur = std::move(next);
            }
            for (const auto& s : cur.members())
                r.add(h, s.set, m.ann);
        }
    return r;
}

ForcingRelation gammaShift(const ForcingRelation& f)
{
    ForcingRelation r;
    r.dom = f.dom;
    r.cod = f.cod;
    ++r.dom.length;
    ++r.cod.length;
    int g = f.dom.symbols;
    auto shift = [g](const PairShape& from, const PairShape& to, Code c, int x, int y) {
        Code l, rr;
        from.decodePair(c, &l, &rr);
        return to.pair(l * g + x, rr * g + y);
    };
    for (const auto& [h, ac] : f.entries)
        for (int x = 0; x < g; ++x)
            for (int y = 0; y < g; ++y) {
                Code nh = shift(f.dom, r.dom, h, x, y);
                for (const auto& m : ac.members()) {
                    std::vector<Code> e;
                    for (Code c : m.set.elems())
                        e.push_back(shift(f.cod, r.cod, c, x, y));
                    r.add(nh, PairSet(std::move(e)), m.ann);
                }
            }
    return r;
}

ForcingRelation unite(const ForcingRelation& a, const ForcingRelation& b)
{
    ForcingRelation r = a;
    for (const auto& [h, ac] : b.entries)
        for (const auto& m : ac.members())
            r.add(h, m.set, m.ann);
    return r;
}

void requireVpda(const Ppda& spec)
{
    auto rep = validate(spec);
    if (!rep.empty())
        throw Error(ErrorCode::Unvalidated, rep.front().message);
    std::string why;
    if (!visiblyShape(spec, &why))
        throw Error(ErrorCode::NotVpda, why);
    if (!isDiracOnly(spec))
        throw Error(ErrorCode::NotVpda, "rules must be Dirac for the nondeterministic procedure");
}

void requirePvpda(const Ppda& spec)
{
    auto rep = validate(spec);
    if (!rep.empty())
        throw Error(ErrorCode::Unvalidated, rep.front().message);
    std::string why;
    if (!visiblyShape(spec, &why))
        throw Error(ErrorCode::NotPvpda, why);
}

namespace {

// Targets of the a-rules at a head, with their rule indices.
std::vector<std::pair<int, const Target*>> movesAt(const Ppda& spec, const HeadIndex& idx, int p, int x, int a)
{
    std::vector<std::pair<int, const Target*>> out;
    for (int ri : idx.rules(p, x))
        if (spec.rules[ri].action == a)
            out.emplace_back(ri, &spec.rules[ri].dist.entries().front().first);
    return out;
}

ForcingRelation localOn(const Ppda& spec, const HeadIndex& idx, int a, const std::vector<int>& domSymbols)
{
    int nq = static_cast<int>(spec.states.size());
    int g = static_cast<int>(spec.stack.size());
    ForcingRelation r;
    r.dom = PairShape{nq, g, 1};
    r.cod = PairShape{nq, g, pushLengthOf((*spec.visibility)[a])};
    for (int p = 0; p < nq; ++p)
        for (int x : domSymbols) {
            auto lm = movesAt(spec, idx, p, x, a);
            for (int q = 0; q < nq; ++q)
                for (int y : domSymbols) {
                    auto rm = movesAt(spec, idx, q, y, a);
                    if (lm.empty() && rm.empty())
                        continue;
                    Code h = r.dom.pair(r.dom.side(p, {x}), r.dom.side(q, {y}));
                    auto elem = [&](const Target* s, const Target* t) {
                        return r.cod.pair(r.cod.side(s->state, s->push), r.cod.side(t->state, t->push));
                    };
                    for (const auto& [ri, t] : lm) {
                        std::vector<Code> e;
                        for (const auto& [rj, u] : rm)
                            e.push_back(elem(t, u));
                        r.add(h, PairSet(std::move(e)), Annotation{a, 0, ri, 0});
                    }
                    for (const auto& [rj, u] : rm) {
                        std::vector<Code> e;
                        for (const auto& [ri, t] : lm)
                            e.push_back(elem(t, u));
                        r.add(h, PairSet(std::move(e)), Annotation{a, 1, rj, 0});
                    }
                }
        }
    return r;
}

std::vector<int> allSymbols(int g)
{
    std::vector<int> v(g);
    for (int i = 0; i < g; ++i)
        v[i] = i;
    return v;
}

// Recode a relation built over the reduction's alphabet onto the source alphabet.
ForcingRelation recode(const ForcingRelation& f, int g)
{
    ForcingRelation r;
    r.dom = PairShape{f.dom.states, g, f.dom.length};
    r.cod = PairShape{f.cod.states, g, f.cod.length};
    auto conv = [](const PairShape& from, const PairShape& to, Code c) {
        Code l, rr;
        from.decodePair(c, &l, &rr);
        int p, q;
        Word u, v;
        from.decodeSide(l, &p, &u);
        from.decodeSide(rr, &q, &v);
        for (int s : u)
            if (s >= to.symbols)
                throw Error(ErrorCode::Shape, "reduction symbol leaked into a source-level relation");
        for (int s : v)
            if (s >= to.symbols)
                throw Error(ErrorCode::Shape, "reduction symbol leaked into a source-level relation");
        return to.pair(to.side(p, u), to.side(q, v));
    };
    for (const auto& [h, ac] : f.entries)
        for (const auto& m : ac.members()) {
            std::vector<Code> e;
            for (Code c : m.set.elems())
                e.push_back(conv(f.cod, r.cod, c));
            r.add(conv(f.dom, r.dom, h), PairSet(std::move(e)), m.ann);
        }
    return r;
}

// Relations of the reduction shared by all source actions.
struct ReducedLocals {
    ForcingRelation weights;     // union over all weight actions
    ForcingRelation hash[3];     // by class: return, internal, call
};

ReducedLocals reducedLocals(const ReducedPda& red)
{
    const Ppda& d = red.spec;
    HeadIndex idx(d);
    std::vector<int> fresh;
    for (int x = red.baseSymbols; x < static_cast<int>(d.stack.size()); ++x)
        fresh.push_back(x);
    ReducedLocals rl;
    bool first = true;
    for (int w : red.weightAction) {
        auto lw = localOn(d, idx, w, fresh);
        rl.weights = first ? lw : unite(rl.weights, lw);
        first = false;
    }
    if (first) {
        int g = static_cast<int>(d.stack.size()), nq = static_cast<int>(d.states.size());
        rl.weights.dom = PairShape{nq, g, 1};
        rl.weights.cod = PairShape{nq, g, 1};
    }
    rl.hash[0] = localOn(d, idx, red.hashR, fresh);
    rl.hash[1] = localOn(d, idx, red.hashInt, fresh);
    rl.hash[2] = localOn(d, idx, red.hashC, fresh);
    return rl;
}

ForcingRelation probabilisticLocal(const Ppda& spec, const ReducedPda& red, const HeadIndex& idx,
                                   const ReducedLocals& rl, int a)
{
    ForcingRelation first = localOn(red.spec, idx, a, allSymbols(red.baseSymbols));
    // in the reduction every source action is internal; the class comes from the source
    int cls = pushLengthOf((*spec.visibility)[a]);
    ForcingRelation composed = liftJoin(liftJoin(first, rl.weights), rl.hash[cls]);
    return recode(composed, red.baseSymbols);
}

} // namespace

ForcingRelation localForcing(const Ppda& spec, int action)
{
    requireVpda(spec);
    HeadIndex idx(spec);
    return localOn(spec, idx, action, allSymbols(static_cast<int>(spec.stack.size())));
}

ForcingRelation localForcingProbabilistic(const Ppda& spec, const ReducedPda& red, int action)
{
    requirePvpda(spec);
    HeadIndex idx(red.spec);
    return probabilisticLocal(spec, red, idx, reducedLocals(red), action);
}

ForcingRelation localForcingProbabilistic(const Ppda& spec, int action)
{
    requirePvpda(spec);
    return localForcingProbabilistic(spec, buildReducedVisibly(spec), action);
}

bool localForcingGame(const Ppda& spec, const ReducedPda& red, int action, Code head, const PairSet& a)
{
    requirePvpda(spec);
    const Ppda& d = red.spec;
    HeadIndex idx(d);
    int nq = static_cast<int>(spec.states.size());
    int g = static_cast<int>(spec.stack.size());
    PairShape dom{nq, g, 1};
    PairShape cod{nq, g, pushLengthOf((*spec.visibility)[action])};
    int hashAct = cod.length == 0 ? red.hashR : cod.length == 1 ? red.hashInt : red.hashC;
    Code l, r;
    dom.decodePair(head, &l, &r);
    int p, q;
    Word u, v;
    dom.decodeSide(l, &p, &u);
    dom.decodeSide(r, &q, &v);

    // One round of the bisimulation game under action set acts: the Attacker
    // picks a side and a move, the Defender answers on the other side with the
    // same action, and cont judges the resulting pair.
    using Cfg = std::pair<int, int>; // state, top symbol
    auto round = [&](Cfg s, Cfg t, const std::vector<int>& acts, auto&& cont) {
        for (int act : acts) {
            auto ms = movesAt(d, idx, s.first, s.second, act);
            auto mt = movesAt(d, idx, t.first, t.second, act);
            for (const auto& [ri, x] : ms) {
                bool all = true;
                for (const auto& [rj, y] : mt)
                    all = all && cont(*x, *y);
                if (all)
                    return true;
            }
            for (const auto& [rj, y] : mt) {
                bool all = true;
                for (const auto& [ri, x] : ms)
                    all = all && cont(*x, *y);
                if (all)
                    return true;
            }
        }
        return false;
    };
    auto level3 = [&](const Target& x, const Target& y) {
        return round({x.state, x.push.at(0)}, {y.state, y.push.at(0)}, {hashAct}, [&](const Target& s, const Target& t) {
            return a.contains(cod.pair(cod.side(s.state, s.push), cod.side(t.state, t.push)));
        });
    };
    auto level2 = [&](const Target& x, const Target& y) {
        return round({x.state, x.push.at(0)}, {y.state, y.push.at(0)}, red.weightAction, level3);
    };
    return round({p, u.at(0)}, {q, v.at(0)}, {action}, level2);
}

namespace {

ForcingRelation termFor(const Ppda& spec, const ForcingRelation& local, int a, const ForcingRelation& f)
{
    switch ((*spec.visibility)[a]) {
    case ActionClass::Return: return local;
    case ActionClass::Internal: return liftJoin(local, f);
    case ActionClass::Call: return liftJoin(liftJoin(local, gammaShift(f)), f);
    }
    return local;
}

} // namespace

LargestForcing largestForcing(const Ppda& spec)
{
    requirePvpda(spec);
    LargestForcing lf;
    int na = static_cast<int>(spec.actions.size());
    if (isDiracOnly(spec)) {
        HeadIndex idx(spec);
        auto syms = allSymbols(static_cast<int>(spec.stack.size()));
        for (int a = 0; a < na; ++a)
            lf.locals.push_back(localOn(spec, idx, a, syms));
    } else {
        auto red = buildReducedVisibly(spec);
        HeadIndex idx(red.spec);
        auto rl = reducedLocals(red);
        for (int a = 0; a < na; ++a)
            lf.locals.push_back(probabilisticLocal(spec, red, idx, rl, a));
    }
    int nq = static_cast<int>(spec.states.size());
    int g = static_cast<int>(spec.stack.size());
    ForcingRelation f;
    f.dom = PairShape{nq, g, 1};
    f.cod = PairShape{nq, g, 0};
    lf.snapshots.push_back(f);
    std::vector<int> order;
    for (ActionClass c : {ActionClass::Return, ActionClass::Internal, ActionClass::Call})
        for (int a = 0; a < na; ++a)
            if ((*spec.visibility)[a] == c)
                order.push_back(a);
    for (int round = 1;; ++round) {
        ForcingRelation next;
        next.dom = f.dom;
        next.cod = f.cod;
        for (int a : order)
            next = unite(next, termFor(spec, lf.locals[a], a, f));
        if (!f.includedIn(next))
            lf.monotone = false;
        if (next == f)
            break;
        // keep the round of sets already present, stamp the new ones
        ForcingRelation stamped;
        stamped.dom = next.dom;
        stamped.cod = next.cod;
        for (const auto& [h, ac] : next.entries)
            for (const auto& m : ac.members()) {
                Annotation ann = m.ann;
                ann.round = round;
                auto it = f.entries.find(h);
                if (it != f.entries.end())
                    for (const auto& old : it->second.members())
                        if (old.set == m.set)
                            ann = old.ann;
                stamped.add(h, m.set, ann);
            }
        f = std::move(stamped);
        lf.snapshots.push_back(f);
        lf.rounds = round;
    }
    lf.fhat = f;
    return lf;
}

const char* vpdaVerdictName(VpdaVerdict v) { return v == VpdaVerdict::Bisimilar ? "BISIMILAR" : "NOT_BISIMILAR"; }

VpdaDecision decideVpda(const Ppda& spec, const Configuration& c1, const Configuration& c2)
{
    if (c1.stack.size() != 1 || c2.stack.empty())
        throw Error(ErrorCode::Shape, "initial configurations must be p0X0 and q0Y0beta'");
    VpdaDecision d;
    d.forcing = largestForcing(spec);
    const auto& f = d.forcing.fhat;
    d.head = f.dom.pair(f.dom.side(c1.state, {c1.stack[0]}), f.dom.side(c2.state, {c2.stack[0]}));
    int nq = static_cast<int>(spec.states.size());
    if (c2.stack.size() > 1) {
        HeadIndex idx(spec);
        for (int q = 0; q < nq; ++q)
            if (!idx.dead(q, c2.stack[1]))
                for (int p = 0; p < nq; ++p)
                    d.target.insert(f.cod.pair(p, q));
    }
    d.verdict = f.holds(d.head, d.target) ? VpdaVerdict::NotBisimilar : VpdaVerdict::Bisimilar;
    return d;
}

int verifyAnnotations(const Ppda& spec, const LargestForcing& lf, std::string* firstFailure)
{
    int failures = 0;
    for (const auto& [h, ac] : lf.fhat.entries)
        for (const auto& m : ac.members()) {
            const Annotation& an = m.ann;
            bool ok = an.round >= 1 && an.round < static_cast<int>(lf.snapshots.size()) && an.action >= 0;
            if (ok) {
                auto term = termFor(spec, lf.locals[an.action], an.action, lf.snapshots[an.round - 1]);
                ok = term.holds(h, m.set);
            }
            if (!ok) {
                if (failures == 0 && firstFailure)
                    *firstFailure = renderPair(spec, lf.fhat.dom, h) + " with round " + std::to_string(an.round);
                ++failures;
            }
        }
    return failures;
}

std::string renderPair(const Ppda& spec, const PairShape& s, Code c)
{
    Code l, r;
    s.decodePair(c, &l, &r);
    auto side = [&](Code x) {
        int p;
        Word w;
        s.decodeSide(x, &p, &w);
        std::string out = spec.states.at(p);
        for (int y : w)
            out += y < static_cast<int>(spec.stack.size()) ? spec.stack[y] : "?";
        return out;
    };
    return "(" + side(l) + "," + side(r) + ")";
}

std::string dumpForcing(const Ppda& spec, const ForcingRelation& f)
{
    std::ostringstream os;
    for (const auto& [h, ac] : f.entries) {
        os << renderPair(spec, f.dom, h) << " ->";
        bool first = true;
        for (const auto& m : ac.members()) {
            os << (first ? " {" : " | {");
            first = false;
            for (std::size_t i = 0; i < m.set.elems().size(); ++i)
                os << (i ? " " : "") << renderPair(spec, f.cod, m.set.elems()[i]);
            os << "}";
        }
        os << "\n";
    }
    return os.str();
}

std::string dumpAnnotations(const Ppda& spec, const ForcingRelation& f)
{
    std::ostringstream os;
    for (const auto& [h, ac] : f.entries)
        for (const auto& m : ac.members()) {
            os << renderPair(spec, f.dom, h) << " {";
            for (std::size_t i = 0; i < m.set.elems().size(); ++i)
                os << (i ? " " : "") << renderPair(spec, f.cod, m.set.elems()[i]);
            os << "} action=" << (m.ann.action >= 0 ? spec.actions[m.ann.action] : "?")
               << " side=" << (m.ann.side == 0 ? "left" : "right") << " move=" << m.ann.move
               << " round=" << m.ann.round << "\n";
        }
    return os.str();
}

} // namespace ppda
