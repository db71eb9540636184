// common.hh -- helpers shared by the unit tests
#ifndef PPDA_TEST_COMMON_HH
#define PPDA_TEST_COMMON_HH

#include "ppda/text_format.hh"

#include <string>

inline std::string dataPath(const std::string& name) { return std::string(PPDA_DATA_DIR) + "/" + name; }

inline ppda::Ppda example1() { return ppda::loadPpdaFile(dataPath("example1.ppda")); }

inline ppda::Configuration cfg(const ppda::Ppda& spec, const std::string& s)
{
    return ppda::parseConfiguration(spec, s);
}

#endif
