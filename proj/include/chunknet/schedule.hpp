#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chunknet/rng.hpp"

namespace chunknet {

/// One successful transmission on the edge from node (link-1) to node link.
struct Transmission {
    std::uint32_t link = 1; // 1-based, in [1, l]
    std::uint64_t time = 0;

    bool operator==(const Transmission&) const = default;
};

/// A line network's record of successful transmissions, sorted strictly
/// ascending by time. Timestamps are unique, so event order is total.
struct Schedule {
    std::uint32_t num_links = 1;
    std::vector<Transmission> transmissions;

    bool operator==(const Schedule&) const = default;

    /// Throws std::invalid_argument when the sorted/unique/range invariants
    /// are violated.
    void validate() const;

    std::vector<std::uint32_t> per_link_counts() const;
};

/// Min-cut capacity: the maximum number of link-disjoint chains, a chain
/// taking one transmission per link 1..l with strictly increasing times.
/// Greedy layer matching: walking events in time order, a link-i transmission
/// consumes the earliest unconsumed arrival at node i-1. O(m) after the sort
/// the Schedule invariant already guarantees.
std::uint64_t capacity(const Schedule& s);

/// Reference max-flow on the time-expanded graph (unit-capacity traffic
/// edges, infinite-capacity memory edges) from (source, 0) to (terminal, inf).
/// Builds the graph explicitly; intended for small schedules and testing.
std::uint64_t capacity_maxflow_oracle(const Schedule& s);

/// Append one transmission per tick on a uniformly random link until the
/// capacity reaches target_n exactly (it grows by at most 1 per tick).
/// Throws std::runtime_error if 1e6 * target_n ticks pass without reaching it.
Schedule generate_schedule(std::uint32_t num_links, std::uint64_t target_n, Rng& rng);

/// Text format: header "l=<int>", then one "link,time" line per transmission,
/// ascending time. Round-trips bit-exactly.
std::string schedule_to_text(const Schedule& s);
/// Throws std::runtime_error naming the offending line on malformed input,
/// unsorted times, or out-of-range links.
Schedule schedule_from_text(const std::string& text);

} // namespace chunknet
