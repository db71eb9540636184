// semantics.hh -- induced pLTS, bounded unfolding, approximants of bisimilarity
#ifndef PPDA_SEMANTICS_HH
#define PPDA_SEMANTICS_HH

#include "ppda/automaton.hh"
#include "ppda/plts.hh"

#include <cstddef>
#include <string>
#include <vector>

namespace ppda {

constexpr std::size_t kDefaultStateCap = 1000000;

struct Step {
    int action = 0;
    Distribution<Configuration> dist;
};

// Outgoing transitions of one configuration of the induced pLTS.
std::vector<Step> successors(const Ppda& spec, const HeadIndex& idx, const Configuration& c);

struct Partition {
    std::vector<int> block; // block id per state (least member), -1 when the state has no verdict

    bool has(int s) const { return s >= 0 && s < static_cast<int>(block.size()) && block[s] >= 0; }
    bool same(int a, int b) const { return has(a) && has(b) && block[a] == block[b]; }
    int blockCount() const;
    std::vector<std::vector<int>> blocks() const; // sorted by block id
};

// Finite carrier for the approximants.  Configurations at depth < radius have
// their transitions expanded; closed balls are complete reachable sets.
struct Ball {
    Plts lts;
    std::vector<Configuration> configs;
    std::vector<int> depth;
    int radius = 0;
    bool closed = false;
    int center1 = 0;
    int center2 = 0;

    int indexOf(const Configuration& c) const; // -1 when absent
};

Ball unfold(const Ppda& spec, const Configuration& c1, const Configuration& c2, int n,
            std::size_t cap = kDefaultStateCap);
// Entire reachable set of the roots; throws BudgetExceeded beyond cap.
Ball unfoldClosed(const Ppda& spec, const std::vector<Configuration>& roots, std::size_t cap = kDefaultStateCap);

// One refinement round.  States with eligible[s] == 0 get -1.  Successors of
// eligible states must carry a block in prev.
Partition refineOnce(const Plts& lts, const Partition& prev, const std::vector<char>& eligible);

// levels[k] is the relation ~_k; state s receives a verdict at level k iff budget[s] >= k.
std::vector<Partition> refineLevels(const Plts& lts, const std::vector<int>& budget, int n);

struct StableResult {
    Partition partition; // bisimilarity on the closed system
    int rounds = 0;      // least k with ~_k = ~_{k+1}
};
StableResult stablePartition(const Plts& lts);

struct DepthVerdict {
    bool equivalent = true;
    int depth = 0; // n when equivalent, else the least distinguishing k
    std::string str() const;
};

DepthVerdict bisimDepth(const Ppda& spec, const Configuration& c1, const Configuration& c2, int n,
                        std::size_t cap = kDefaultStateCap);
// Same verdict computed on a ball the caller already built (radius >= n).
DepthVerdict bisimDepthOnBall(const Ball& ball, int n);

// ~_n partition on states within distance radius - n of a center.
Partition bisimClasses(const Ppda& spec, const Ball& ball, int n);

bool rEquivalent(const Distribution<int>& d, const Distribution<int>& e, const Partition& R);
bool lemma1Check(const Distribution<int>& d, const Distribution<int>& e, const Partition& R);

std::string dumpBall(const Ppda& spec, const Ball& ball, const Partition& p);
std::string dotBall(const Ppda& spec, const Ball& ball);

} // namespace ppda

#endif
