#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chunknet/simulate.hpp"

namespace chunknet {

struct DecodeOutcome {
    bool success = false;
    std::size_t global_rank = 0;             // for the chunked decoder: rank is
                                             // not computed; field stays 0 there
    std::vector<std::uint32_t> decoded_symbols; // sorted recovered indices
    // Payload mode only. Global decoder: present iff success. Chunked
    // decoder: always present, decoded slots filled, the rest left empty.
    std::optional<Message> message;
    std::size_t rounds = 0;                  // chunked decoder passes executed
};

/// Success iff the terminal's global k x m matrix has rank k. In payload
/// mode a successful decode also recovers and returns the message.
DecodeOutcome decode_global(const TerminalReport& report);

/// Iterative per-chunk decoder. Each pass walks chunks in index order,
/// restricts every chunk's equations to its still-unknown symbols (known
/// symbols are substituted out), eliminates the alpha-sized local system,
/// and decodes any unknown the reduced system pins uniquely — full local
/// rank decodes the whole chunk, and unit rows decode single symbols even
/// without it. Stops when a pass makes no progress. Substitution takes
/// effect immediately, so within a pass later chunks see earlier results.
DecodeOutcome decode_chunked(const TerminalReport& report, const CodeSpec& spec);

} // namespace chunknet
