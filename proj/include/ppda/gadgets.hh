// gadgets.hh -- AND/OR gadgets and the two hardness constructions
//
// afaToPoca turns a one-letter alternating automaton into a unary fully
// probabilistic pOCA with  qX^nZ ~ q'X^nZ  iff  not Acc(q, n).
// gameToPvpda turns a pushdown reachability game into a fully probabilistic
// pvPDA with  p0X0 ~ p0'X0  iff  Player 0 wins.
#ifndef PPDA_GADGETS_HH
#define PPDA_GADGETS_HH

#include "ppda/automaton.hh"
#include "ppda/plts.hh"

#include <string>
#include <vector>

namespace ppda {

// s -a-> t1|t2 and s' -a-> t1'|t2'.  Throws Redefined when s or s' already moves.
void buildAndGadget(Plts& lts, int action, int s, int sp, int t1, int t1p, int t2, int t2p);

struct OrGadgetStates {
    int u12 = -1, u1p2p = -1, u12p = -1, u1p2 = -1;
};
// Adds the four intermediate states (named after s) and the six half-half moves.
OrGadgetStates buildOrGadget(Plts& lts, int action, int s, int sp, int t1, int t1p, int t2, int t2p);

struct OneLetterAfa {
    struct Delta {
        bool conj = false; // q1 & q2 when true, q1 | q2 otherwise
        int q1 = 0, q2 = 0;
    };
    std::vector<std::string> states;
    int initial = 0;
    std::vector<char> accepting;
    std::vector<Delta> delta;

    int index(const std::string& n) const;
};

//   afa-states: q0 q1
//   initial: q0
//   accepting: q1
//   q0 = q0 | q1
//   q1 = q1 & q1
OneLetterAfa parseAfa(const std::string& text);
std::string renderAfa(const OneLetterAfa& afa);

// Acc(q, n), memoised over all states up to n.
bool accOracle(const OneLetterAfa& afa, int q, int n);
std::vector<std::vector<char>> accTable(const OneLetterAfa& afa, int n); // [n][q]

struct AfaPoca {
    Ppda spec;
    int p = -1, pp = -1, r = -1;
    std::vector<int> q, qp; // images of the AFA states and their primed copies
};

AfaPoca afaToPoca(const OneLetterAfa& afa);

// table[n][q] is whether qX^nZ ~ q'X^nZ, computed on the finite closed
// reachable set of all these configurations; rounds receives the number of
// refinement rounds needed to stabilise.
std::vector<std::vector<char>> afaPocaBisimTable(const AfaPoca& poca, int nMax, int* rounds = nullptr);

// Every transition function over nStates states with every accepting set; initial state 0.
std::vector<OneLetterAfa> enumerateAfas(int nStates);

struct PushdownGame {
    Ppda spec;              // Dirac-only, single action
    std::vector<int> owner; // 0 or 1 per control state
    int p0 = 0, x0 = 0;
};

// Automaton text plus  owner0: ...  owner1: ...  initial: p0 X0
PushdownGame parseGame(const std::string& text);
std::string renderGame(const PushdownGame& g);
void validateGame(const PushdownGame& g); // throws Shape

enum class GameWinner { Player0, Player1, Unresolved };
const char* gameWinnerName(GameWinner w);

struct GameSolution {
    GameWinner winner = GameWinner::Unresolved;
    bool finite = false;  // reachable graph fully explored
    int explored = 0;
    int rank = -1;        // attractor rank of the initial configuration when Player 1 wins
};

// Exact on finite reachable graphs (up to cap configurations); otherwise
// Player 1 wins only when the depth-bounded attractor reaches the start.
GameSolution solveGameBounded(const PushdownGame& g, int depthBound, std::size_t cap = 200000);

struct GamePvpda {
    Ppda spec;
    Configuration left, right; // p0X0 and p0'X0
};

GamePvpda gameToPvpda(const PushdownGame& g);
// The same construction with probabilistic branching replaced by nondeterministic branching.
Ppda nondeterminise(const Ppda& spec);

} // namespace ppda

#endif
