// vpda.hh -- forcing relations and the exact decision procedure for (p)vPDA
//
// Elements of a forcing relation are pairs of configurations c.d whose stacks
// have a fixed length L (0, 1 or 2).  A side pX1..XL is coded as
// p*g^L + X1*g^(L-1) + ... + XL and a pair as left*(|Q| g^L) + right, where g
// is the stack alphabet size used by the relation.
//
// A relation maps a domain pair to an antichain of minimal target sets; a
// membership query (h, A) succeeds iff some minimal set is contained in A.
#ifndef PPDA_VPDA_HH
#define PPDA_VPDA_HH

#include "ppda/automaton.hh"
#include "ppda/reduction.hh"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ppda {

using Code = std::int64_t;

// Sorted set of element codes.
class PairSet {
public:
    PairSet() = default;
    explicit PairSet(std::vector<Code> elems);

    const std::vector<Code>& elems() const { return e_; }
    std::size_t size() const { return e_.size(); }
    bool empty() const { return e_.empty(); }
    bool contains(Code c) const;
    bool subsetOf(const PairSet& b) const;
    PairSet unite(const PairSet& b) const;
    void insert(Code c);

    friend bool operator==(const PairSet& a, const PairSet& b) { return a.e_ == b.e_; }
    friend bool operator<(const PairSet& a, const PairSet& b)
    {
        return a.e_.size() != b.e_.size() ? a.e_.size() < b.e_.size() : a.e_ < b.e_;
    }

private:
    std::vector<Code> e_;
};

// The Attacker choice that introduced a minimal set.  side 0 is the left
// configuration; move is the rule index in the automaton the relation is built on.
struct Annotation {
    int action = -1;
    int side = -1;
    int move = -1;
    int round = 0;
};

struct Member {
    PairSet set;
    Annotation ann;
};

// Minimal sets only.  Members are sorted by (size, elements) for determinism.
class Antichain {
public:
    // false when an existing member is contained in s
    bool insert(const PairSet& s, const Annotation& a = {});
    bool covers(const PairSet& a) const; // some member is a subset of a
    bool wellFormed() const;             // no member contains another
    const std::vector<Member>& members() const { return m_; }
    bool empty() const { return m_.empty(); }
    std::size_t size() const { return m_.size(); }

private:
    std::vector<Member> m_;
};

struct PairShape {
    int states = 0;
    int symbols = 0; // g
    int length = 0;  // L
    Code sideCount() const;
    Code pairCount() const { return sideCount() * sideCount(); }
    Code side(int p, const Word& w) const;
    Code pair(Code left, Code right) const { return left * sideCount() + right; }
    void decodeSide(Code c, int* p, Word* w) const;
    void decodePair(Code c, Code* left, Code* right) const;
};

struct ForcingRelation {
    PairShape dom;
    PairShape cod;
    std::map<Code, Antichain> entries; // nonempty antichains only

    bool holds(Code h, const PairSet& a) const;
    void add(Code h, const PairSet& s, const Annotation& ann = {});
    std::size_t memberCount() const;
    bool antichainInvariant() const;
    // every minimal set of this relation is covered by b
    bool includedIn(const ForcingRelation& b) const;
    friend bool operator==(const ForcingRelation& a, const ForcingRelation& b);
};

// F . G; G's domain shape equals F's codomain shape.  Annotations follow F.
ForcingRelation liftJoin(const ForcingRelation& f, const ForcingRelation& g);
// F_{/Gamma}: every entry extended by one symbol X on the left and Y on the right.
ForcingRelation gammaShift(const ForcingRelation& f);
ForcingRelation unite(const ForcingRelation& a, const ForcingRelation& b);

// Local relation of one action of a Dirac-only vPDA.
ForcingRelation localForcing(const Ppda& spec, int action);
// Local relation of a pvPDA action by composing the three steps in the
// visibly reduction; codomain recoded over the original alphabet.
ForcingRelation localForcingProbabilistic(const Ppda& spec, const ReducedPda& red, int action);
ForcingRelation localForcingProbabilistic(const Ppda& spec, int action);
// Direct membership by the three-level alternating choice in the reduction.
bool localForcingGame(const Ppda& spec, const ReducedPda& red, int action, Code head, const PairSet& a);

struct LargestForcing {
    ForcingRelation fhat;
    std::vector<ForcingRelation> snapshots; // snapshots[i] is the relation after round i
    int rounds = 0;
    bool monotone = true;
    std::vector<ForcingRelation> locals; // per action of the source
};

LargestForcing largestForcing(const Ppda& spec);

enum class VpdaVerdict { Bisimilar, NotBisimilar };
const char* vpdaVerdictName(VpdaVerdict v);

struct VpdaDecision {
    VpdaVerdict verdict = VpdaVerdict::Bisimilar;
    Code head = 0;
    PairSet target;
    LargestForcing forcing;
};

// c1 must be p0X0; c2 = q0Y0beta'.
VpdaDecision decideVpda(const Ppda& spec, const Configuration& c1, const Configuration& c2);

// Each annotated entry is re-derived from the entries of strictly earlier
// rounds through its annotated action; returns the number of failures.
int verifyAnnotations(const Ppda& spec, const LargestForcing& lf, std::string* firstFailure = nullptr);

std::string renderPair(const Ppda& spec, const PairShape& s, Code c);
std::string dumpForcing(const Ppda& spec, const ForcingRelation& f);
std::string dumpAnnotations(const Ppda& spec, const ForcingRelation& f);

// Requirements for the decision procedure.
void requireVpda(const Ppda& spec);  // visibly, Dirac-only
void requirePvpda(const Ppda& spec); // visibly

} // namespace ppda

#endif
