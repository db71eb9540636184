// text_format.hh -- line-oriented automaton format
//
//   states: p q r
//   stack: X X' Y Z
//   actions: a
//   visibility: r=a_r int=a,b c=a_c        (optional)
//   p X a -> 1/2 q X X | 1/2 p .
//
// '.' is the empty word, '#' starts a comment.  Probabilities are integers,
// fractions n/d, or decimals (converted exactly).
#ifndef PPDA_TEXT_FORMAT_HH
#define PPDA_TEXT_FORMAT_HH

#include "ppda/automaton.hh"

#include <map>
#include <string>
#include <vector>

namespace ppda {

struct ParseResult {
    Ppda spec;
    ValidationReport issues; // undeclared names found while reading rules
    std::map<std::string, std::vector<std::string>> extraHeaders; // unknown "key:" lines, kept for game files
};

// Syntax errors throw Error(Parse) with the line number.
ParseResult parsePpda(const std::string& text);
ParseResult parsePpdaFile(const std::string& path);
// Convenience: parse, then throw Error(Unvalidated) on any issue.
Ppda loadPpda(const std::string& text);
Ppda loadPpdaFile(const std::string& path);

std::string renderPpda(const Ppda& spec);

// "pXZ" (greedy longest-match names), "p X Z", "p." or "p" for the empty stack.
Configuration parseConfiguration(const Ppda& spec, const std::string& s);

std::vector<std::string> splitWs(const std::string& s);
std::string readFile(const std::string& path);

} // namespace ppda

#endif
