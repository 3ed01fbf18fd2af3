#include "chunknet/simulate.hpp"

#include <stdexcept>

namespace chunknet {

BinaryVector global_payload(const CodeSpec& spec, const Packet& p) {
    BinaryVector global(spec.k);
    const std::uint64_t base = static_cast<std::uint64_t>(p.chunk) * spec.stride;
    if (base % 64 == 0 && spec.alpha % 64 == 0 && spec.k % 64 == 0) {
        // aligned fast path: whole-word cyclic placement
        auto dst = global.words();
        auto src = p.coeffs.words();
        const std::size_t kw = spec.k / 64;
        std::size_t w0 = base / 64;
        for (std::size_t j = 0; j < src.size(); ++j)
            dst[(w0 + j) % kw] = src[j];
        return global;
    }
    for (std::uint32_t j = 0; j < spec.alpha; ++j)
        if (p.coeffs.get(j)) global.set((base + j) % spec.k, true);
    return global;
}

NodeState::NodeState(NodeRole role, const CodeSpec& spec, const Message* message)
    : role_(role),
      spec_(spec),
      message_(message),
      words_per_packet_((spec.alpha + 63) / 64),
      coeff_words_(role == NodeRole::Source ? 0 : spec.q),
      infos_(role == NodeRole::Source ? 0 : spec.q),
      counts_(spec.q, 0) {}

NodeState NodeState::source(const CodeSpec& spec, const Message* message) {
    return NodeState(NodeRole::Source, spec, message);
}

NodeState NodeState::relay(const CodeSpec& spec) {
    return NodeState(NodeRole::Relay, spec, nullptr);
}

NodeState NodeState::terminal(const CodeSpec& spec) {
    return NodeState(NodeRole::Terminal, spec, nullptr);
}

void NodeState::receive(const Packet& p) {
    if (role_ == NodeRole::Source)
        throw std::logic_error("NodeState: source does not receive packets");
    if (p.chunk >= spec_.q || p.coeffs.size() != spec_.alpha)
        throw std::invalid_argument("NodeState::receive: packet does not fit the spec");
    auto& words = coeff_words_[p.chunk];
    words.insert(words.end(), p.coeffs.words().begin(), p.coeffs.words().end());
    if (p.info) infos_[p.chunk].push_back(*p.info);
    if (counts_[p.chunk]++ == 0) ++nonempty_;
}

Packet NodeState::packet_at(std::uint32_t chunk, std::size_t i) const {
    Packet p;
    p.chunk = chunk;
    p.coeffs = BinaryVector(spec_.alpha);
    auto dst = p.coeffs.words();
    const auto* src = coeff_words_[chunk].data() + i * words_per_packet_;
    for (std::size_t w = 0; w < words_per_packet_; ++w) dst[w] = src[w];
    if (!infos_[chunk].empty()) p.info = infos_[chunk][i];
    return p;
}

namespace {

Packet source_emit(const NodeState& node, const CodeSpec& spec, std::uint32_t chunk,
                   Rng& rng) {
    Packet p;
    p.chunk = chunk;
    p.coeffs = random_bernoulli(spec.alpha, rng);
    if (const Message* msg = node.message()) {
        const std::uint64_t base = static_cast<std::uint64_t>(chunk) * spec.stride;
        BinaryVector info((*msg)[0].size());
        for (std::uint32_t j = 0; j < spec.alpha; ++j)
            if (p.coeffs.get(j)) info ^= (*msg)[(base + j) % spec.k];
        p.info = std::move(info);
    }
    return p;
}

} // namespace

std::optional<Packet> emit(const NodeState& node, const CodeSpec& spec, ChunkPolicy policy,
                           Rng& rng) {
    std::uint32_t chunk;
    if (node.role_ == NodeRole::Source || policy == ChunkPolicy::UniformAll) {
        chunk = static_cast<std::uint32_t>(uniform_below(rng, spec.q));
    } else {
        if (node.nonempty_ == 0) return std::nullopt;
        auto pick = uniform_below(rng, node.nonempty_);
        chunk = 0;
        for (std::uint32_t w = 0; w < spec.q; ++w) {
            if (node.counts_[w] == 0) continue;
            if (pick-- == 0) {
                chunk = w;
                break;
            }
        }
    }

    if (node.role_ == NodeRole::Source) return source_emit(node, spec, chunk, rng);

    const std::size_t count = node.counts_[chunk];
    if (count == 0) return std::nullopt;

    const BinaryVector mask = random_bernoulli(count, rng);
    Packet p;
    p.chunk = chunk;
    p.coeffs = BinaryVector(spec.alpha);
    auto out = p.coeffs.words();
    const std::size_t wpp = node.words_per_packet_;
    const auto* base = node.coeff_words_[chunk].data();
    const bool payload = !node.infos_[chunk].empty();
    BinaryVector info;
    if (payload) info = BinaryVector(node.infos_[chunk][0].size());
    for (std::size_t i = 0; i < count; ++i) {
        if (!mask.get(i)) continue;
        const auto* src = base + i * wpp;
        for (std::size_t w = 0; w < wpp; ++w) out[w] ^= src[w];
        if (payload) info ^= node.infos_[chunk][i];
    }
    if (payload) p.info = std::move(info);
    return p;
}

BinaryMatrix TerminalReport::global_matrix() const {
    BinaryMatrix m(spec.k);
    for (const auto& p : packets) m.append_column(global_payload(spec, p));
    return m;
}

TerminalReport simulate(const CodeSpec& spec, const Schedule& schedule, SimMode mode,
                        ChunkPolicy policy, Rng& rng, const Message* message) {
    if (mode == SimMode::Payload) {
        if (message == nullptr || message->size() != spec.k)
            throw std::invalid_argument("simulate: payload mode needs a message of k symbols");
        for (const auto& sym : *message)
            if (sym.size() != message->front().size())
                throw std::invalid_argument("simulate: message symbols differ in width");
    } else {
        message = nullptr;
    }

    std::vector<NodeState> nodes;
    nodes.reserve(schedule.num_links + 1);
    nodes.push_back(NodeState::source(spec, message));
    for (std::uint32_t i = 1; i < schedule.num_links; ++i)
        nodes.push_back(NodeState::relay(spec));
    nodes.push_back(NodeState::terminal(spec));

    TerminalReport report;
    report.spec = spec;
    for (const auto& t : schedule.transmissions) {
        auto packet = emit(nodes[t.link - 1], spec, policy, rng);
        if (!packet) continue;
        if (t.link == schedule.num_links)
            report.packets.push_back(std::move(*packet));
        else
            nodes[t.link].receive(*packet);
    }
    return report;
}

} // namespace chunknet
