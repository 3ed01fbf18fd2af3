#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chunknet/code_spec.hpp"
#include "chunknet/gf2.hpp"
#include "chunknet/rng.hpp"
#include "chunknet/schedule.hpp"

namespace chunknet {

/// How a node picks the chunk for an emission. uniform-all draws over all q
/// chunks and wastes the slot when the chosen buffer is empty; that matches
/// the lost-transmission accounting of the chunked-code analysis.
/// uniform-nonempty draws only among chunks the node has packets for.
enum class ChunkPolicy { UniformAll, UniformNonempty };

enum class SimMode { RankOnly, Payload };

/// The message is a list of k symbols of equal bit width.
using Message = std::vector<BinaryVector>;

/// An in-flight coded packet. coeffs is chunk-local: bit j refers to global
/// symbol (chunk*stride + j) mod k. info carries the coded symbol in payload
/// mode and is absent in rank-only runs.
struct Packet {
    std::uint32_t chunk = 0;
    BinaryVector coeffs;
    std::optional<BinaryVector> info;

    bool operator==(const Packet&) const = default;
};

/// Lift a packet's chunk-local coefficients to the global length-k payload
/// vector (a cyclic placement starting at chunk*stride).
BinaryVector global_payload(const CodeSpec& spec, const Packet& p);

enum class NodeRole { Source, Relay, Terminal };

/// Per-node receive buffers, one per chunk. The source's buffers are
/// virtual: chunk w acts as if it held the alpha unit vectors of its
/// support (plus the true symbols in payload mode), so source emissions are
/// Bernoulli vectors over the aperture and never waste a slot.
class NodeState {
public:
    static NodeState source(const CodeSpec& spec, const Message* message = nullptr);
    static NodeState relay(const CodeSpec& spec);
    static NodeState terminal(const CodeSpec& spec);

    NodeRole role() const { return role_; }
    const CodeSpec& spec() const { return spec_; }

    void receive(const Packet& p);

    std::size_t buffered(std::uint32_t chunk) const { return counts_[chunk]; }
    std::size_t nonempty_chunks() const { return nonempty_; }
    /// Reconstructs the i-th packet of a chunk buffer (test access).
    Packet packet_at(std::uint32_t chunk, std::size_t i) const;

    const Message* message() const { return message_; }

private:
    NodeState(NodeRole role, const CodeSpec& spec, const Message* message);

    friend std::optional<Packet> emit(const NodeState&, const CodeSpec&, ChunkPolicy, Rng&);

    NodeRole role_;
    CodeSpec spec_;
    const Message* message_ = nullptr; // source in payload mode only
    std::size_t words_per_packet_ = 0;
    std::size_t nonempty_ = 0;
    // flattened per-chunk storage: coefficient words back to back
    std::vector<std::vector<std::uint64_t>> coeff_words_;
    std::vector<std::vector<BinaryVector>> infos_;
    std::vector<std::size_t> counts_;
};

/// One coded emission. Draw order, which the reproducibility contract
/// depends on: one draw selects the chunk (none when uniform-nonempty finds
/// every buffer empty), then ceil(B/64) draws form the Bernoulli mask over
/// the B buffered packets (B = alpha at the source). Returns nothing for an
/// empty relay buffer: the slot is wasted.
std::optional<Packet> emit(const NodeState& node, const CodeSpec& spec, ChunkPolicy policy,
                           Rng& rng);

/// Everything the terminal received, in arrival order.
struct TerminalReport {
    CodeSpec spec;
    std::vector<Packet> packets;

    /// k x m matrix whose columns are the packets' global payload vectors.
    BinaryMatrix global_matrix() const;

    bool operator==(const TerminalReport&) const = default;
};

/// Run one transfer over the schedule: for each transmission on link i at
/// time t, node i-1 emits and node i receives. Deterministic given
/// (spec, schedule, rng seed); draws happen in transmission order.
/// A message of k equal-width symbols is required in payload mode.
TerminalReport simulate(const CodeSpec& spec, const Schedule& schedule, SimMode mode,
                        ChunkPolicy policy, Rng& rng, const Message* message = nullptr);

} // namespace chunknet
