// distribution.hh -- finite distributions with exact rational weights
#ifndef PPDA_DISTRIBUTION_HH
#define PPDA_DISTRIBUTION_HH

#include "ppda/rational.hh"

#include <algorithm>
#include <utility>
#include <vector>

namespace ppda {

// Entries are kept sorted by key with duplicates merged.  Construction does
// not enforce the sum-to-one law so that malformed input can be reported by
// validation instead of being rejected early; wellFormed() checks it.
template <class T>
class Distribution {
public:
    using Entry = std::pair<T, Rational>;

    Distribution() = default;
    explicit Distribution(std::vector<Entry> entries) : entries_(std::move(entries)) { normalise(); }

    static Distribution dirac(const T& t) { return Distribution({{t, Rational(1)}}); }

    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    std::vector<T> support() const
    {
        std::vector<T> s;
        s.reserve(entries_.size());
        for (const auto& e : entries_)
            s.push_back(e.first);
        return s;
    }

    Rational total() const
    {
        Rational s;
        for (const auto& e : entries_)
            s += e.second;
        return s;
    }

    Rational operator()(const T& t) const
    {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), t,
                                   [](const Entry& e, const T& k) { return e.first < k; });
        if (it != entries_.end() && !(t < it->first))
            return it->second;
        return Rational(0);
    }

    // mass of the sub-support selected by a bitmask over the sorted support
    Rational massOfMask(unsigned long mask) const
    {
        Rational s;
        for (std::size_t i = 0; i < entries_.size(); ++i)
            if (mask >> i & 1UL)
                s += entries_[i].second;
        return s;
    }

    bool allPositive() const
    {
        return std::all_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.second > Rational(0); });
    }
    bool wellFormed() const { return !entries_.empty() && allPositive() && total().isOne(); }
    bool isDirac() const { return entries_.size() == 1 && entries_[0].second.isOne(); }

    friend bool operator==(const Distribution& a, const Distribution& b) { return a.entries_ == b.entries_; }
    friend bool operator<(const Distribution& a, const Distribution& b) { return a.entries_ < b.entries_; }

private:
    void normalise()
    {
        std::stable_sort(entries_.begin(), entries_.end(),
                         [](const Entry& a, const Entry& b) { return a.first < b.first; });
        std::vector<Entry> merged;
        for (auto& e : entries_) {
            if (!merged.empty() && !(merged.back().first < e.first))
                merged.back().second += e.second;
            else
                merged.push_back(std::move(e));
        }
        entries_ = std::move(merged);
    }

    std::vector<Entry> entries_;
};

} // namespace ppda

#endif
