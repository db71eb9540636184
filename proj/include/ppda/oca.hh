// oca.hh -- analysis of probabilistic one-counter automata
//
// Configurations pX^mZ are addressed by (state, counter).  The background
// colour of a grid point follows from dist and ~_k; the bounded-grid
// procedure takes the greatest consistent colouring of a finite region.
#ifndef PPDA_OCA_HH
#define PPDA_OCA_HH

#include "ppda/automaton.hh"
#include "ppda/plts.hh"
#include "ppda/semantics.hh"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace ppda {

void requirePoca(const Ppda& spec);
Configuration ocaConfig(const Ppda& spec, int state, int counter);
// true iff c has the shape pX^mZ
bool ocaCoordinates(const Ppda& spec, const Configuration& c, int* state, int* counter);

// F_Delta: control states with the counter assumed positive.
Plts underlyingFlts(const Ppda& spec);

// Members pX^mZ with m < mLimit (default |Q|, which the definition guarantees suffices).
std::vector<Configuration> computeInc(const Ppda& spec, int mLimit = -1);

struct DistResult {
    bool finite = false;
    int value = 0; // the distance when finite, else the step budget that was searched
    std::string str() const;
};

// Breadth-first search over the counter system, probabilities ignored.
DistResult computeDist(const Ppda& spec, const Configuration& c, int maxSteps);
// Exact distance using pop summaries for excursions above the table height; nullopt is infinity.
std::optional<int> exactDist(const Ppda& spec, int state, int counter);

struct GridPoint {
    int m = 0, n = 0, p = 0, q = 0;
};

enum class Background { Colour1, Colour0, NotBackground };
const char* backgroundName(Background b);

Background classifyBackground(const Ppda& spec, const GridPoint& g, int kDepth, int distBudget);

struct ConsistencyResult {
    bool consistent = true;
    int s = -1, t = -1;
    std::string reason;
};

// R is consistent iff each pair passes the local test w.r.t. R.
ConsistencyResult consistencyCheck(const Plts& lts, const std::vector<char>& expanded,
                                   const std::vector<std::pair<int, int>>& R);
std::vector<char> expandedStates(const Ball& ball);
std::vector<std::pair<int, int>> pairsOf(const Partition& p);

struct GridBounds {
    int mMax = -1;         // default |Q|^2 (raised to cover the query)
    int nMax = -1;         // default |Q|^2 (raised to cover the query)
    int kDepth = -1;       // default |Q|
    int distBudget = -1;   // finite distances beyond it count as unresolved; default 10^6
    int witnessCap = 64;   // largest depth searched for a distinguishing witness
};

enum class GridVerdict { BisimilarCertified, NotBisimilar, Inconclusive };
const char* gridVerdictName(GridVerdict v);

struct GridResult {
    GridVerdict verdict = GridVerdict::Inconclusive;
    int witnessDepth = -1;
    std::string reason;
    GridBounds bounds; // effective values
    int k = 0;
    // colour per region point (index via at()), 1 kept, 0 erased
    std::vector<signed char> colour;
    std::vector<Background> kind;
    int at(int m, int n, int p, int q) const { return ((m * (bounds.nMax + 1) + n) * k + p) * k + q; }
};

GridResult decideBoundedGrid(const Ppda& spec, const Configuration& c1, const Configuration& c2,
                             GridBounds bounds = {});

std::uint64_t periodPsi(int k); // k!, throws beyond 20

// A belt holds points with 0 <= d*n - c*m - offset < thickness; its colour at
// (m, n, p, q) is pattern[j][m mod (psi*d)][p*k + q].
struct Belt {
    int c = 1, d = 1, offset = 0, thickness = 1;
    std::vector<std::vector<std::string>> pattern;
    int row(int m, int n) const { return d * n - c * m - offset; }
};

struct Colouring {
    int k = 0;
    std::uint64_t psi = 1;
    int mBound = 0, nBound = 0;
    std::map<std::tuple<int, int, int, int>, int> points;
    std::vector<Belt> belts;
};

Colouring parseCertificate(const Ppda& spec, const std::string& text);
std::string renderCertificate(const Ppda& spec, const Colouring& chi);

struct CertificateVerdict {
    bool accepted = true;
    GridPoint point;
    std::string reason;
};

CertificateVerdict verifyPeriodicCertificate(const Ppda& spec, const Colouring& chi);

// Explicit region from a grid run; belt patterns are read off the region along
// each given belt shape (pattern filled from the last full period inside the region).
Colouring certificateFromGrid(const Ppda& spec, const GridResult& grid, std::vector<Belt> shapes);

} // namespace ppda

#endif
