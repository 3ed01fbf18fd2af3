#include "chunknet/decode.hpp"

#include <stdexcept>

namespace chunknet {

namespace {

bool payload_mode(const TerminalReport& report) {
    if (report.packets.empty()) return false;
    const bool with_info = report.packets.front().info.has_value();
    for (const Packet& p : report.packets)
        if (p.info.has_value() != with_info)
            throw std::invalid_argument("decode: mixed payload/rank-only packets");
    return with_info;
}

std::vector<std::uint32_t> sorted_indices(const std::vector<char>& decoded) {
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < decoded.size(); ++i)
        if (decoded[i]) out.push_back(static_cast<std::uint32_t>(i));
    return out;
}

} // namespace

DecodeOutcome decode_global(const TerminalReport& report) {
    const CodeSpec& spec = report.spec;
    const bool payload = payload_mode(report);

    DecodeOutcome out;
    Gf2Basis basis(spec.k);
    for (const Packet& p : report.packets) {
        basis.insert(global_payload(spec, p));
        if (basis.full()) break;
    }
    out.global_rank = basis.rank();
    out.success = basis.full();
    if (!out.success) return out;

    out.decoded_symbols.resize(spec.k);
    for (std::uint32_t i = 0; i < spec.k; ++i) out.decoded_symbols[i] = i;

    if (payload) {
        BinaryMatrix m(spec.k);
        std::vector<BinaryVector> y;
        y.reserve(report.packets.size());
        for (const Packet& p : report.packets) {
            m.append_column(global_payload(spec, p));
            y.push_back(*p.info);
        }
        SolveResult r = solve(m, y);
        out.message = std::move(std::get<std::vector<BinaryVector>>(r));
    }
    return out;
}

DecodeOutcome decode_chunked(const TerminalReport& report, const CodeSpec& spec) {
    if (!(spec == report.spec))
        throw std::invalid_argument("decode_chunked: spec does not match the report");
    const bool payload = payload_mode(report);
    const std::uint32_t k = spec.k;
    const std::uint32_t alpha = spec.alpha;

    std::vector<std::vector<std::uint32_t>> by_chunk(spec.q);
    for (std::size_t i = 0; i < report.packets.size(); ++i) {
        const Packet& p = report.packets[i];
        if (p.chunk >= spec.q || p.coeffs.size() != alpha)
            throw std::invalid_argument("decode_chunked: malformed packet");
        by_chunk[p.chunk].push_back(static_cast<std::uint32_t>(i));
    }

    std::vector<char> decoded(k, 0);
    std::vector<BinaryVector> values;
    if (payload) values.resize(k);
    std::size_t left = k;

    DecodeOutcome out;

    // Scratch reused across chunks within a pass.
    std::vector<int> col_of_local(alpha, -1);
    std::vector<std::uint32_t> unknown_local;

    bool progress = true;
    while (left > 0 && progress) {
        progress = false;
        ++out.rounds;
        for (std::uint32_t w = 0; w < spec.q; ++w) {
            if (by_chunk[w].empty()) continue;
            const std::vector<std::uint32_t> support = chunk_support(spec, w);

            unknown_local.clear();
            for (std::uint32_t j = 0; j < alpha; ++j) {
                if (!decoded[support[j]]) {
                    col_of_local[j] = static_cast<int>(unknown_local.size());
                    unknown_local.push_back(j);
                } else {
                    col_of_local[j] = -1;
                }
            }
            const std::size_t u = unknown_local.size();
            if (u == 0) continue;

            // Restrict this chunk's equations to the unknowns and eliminate.
            std::vector<int> slot_of_pivot(u, -1);
            std::vector<BinaryVector> rows;
            std::vector<BinaryVector> rhss;
            for (std::uint32_t pi : by_chunk[w]) {
                const Packet& p = report.packets[pi];
                BinaryVector row(u);
                BinaryVector rhs;
                if (payload) rhs = *p.info;
                for (std::uint32_t j = 0; j < alpha; ++j) {
                    if (!p.coeffs.get(j)) continue;
                    if (col_of_local[j] >= 0)
                        row.set(static_cast<std::size_t>(col_of_local[j]), true);
                    else if (payload)
                        rhs ^= values[support[j]];
                }
                int h = row.highest_bit();
                while (h >= 0 && slot_of_pivot[h] >= 0) {
                    row ^= rows[slot_of_pivot[h]];
                    if (payload) rhs ^= rhss[slot_of_pivot[h]];
                    h = row.highest_bit_below(h);
                }
                if (h < 0) continue; // dependent
                slot_of_pivot[h] = static_cast<int>(rows.size());
                rows.push_back(std::move(row));
                if (payload) rhss.push_back(std::move(rhs));
                if (rows.size() == u) break;
            }
            if (rows.empty()) continue;
            const bool full = rows.size() == u;

            if (full && !payload) {
                // Every unknown of the chunk is pinned; no need to reduce.
                for (std::uint32_t j : unknown_local) {
                    decoded[support[j]] = 1;
                    --left;
                }
                progress = true;
                continue;
            }

            // Reduced row echelon form; with full rank every row ends up a
            // unit row, otherwise unit rows still pin single symbols.
            for (std::size_t p = 0; p < u; ++p) {
                const int s = slot_of_pivot[p];
                if (s < 0) continue;
                for (std::size_t t = 0; t < rows.size(); ++t) {
                    if (static_cast<int>(t) == s || !rows[t].get(p)) continue;
                    rows[t] ^= rows[s];
                    if (payload) rhss[t] ^= rhss[s];
                }
            }
            for (std::size_t t = 0; t < rows.size(); ++t) {
                if (rows[t].popcount() != 1) continue;
                const int bit = rows[t].highest_bit();
                const std::uint32_t g = support[unknown_local[bit]];
                if (decoded[g]) continue;
                decoded[g] = 1;
                if (payload) values[g] = rhss[t];
                --left;
                progress = true;
            }
        }
    }

    out.success = left == 0;
    out.decoded_symbols = sorted_indices(decoded);
    if (payload) {
        // Partial results are part of the contract: undecoded slots stay
        // empty so callers can tell recovered symbols from missing ones.
        Message msg(k);
        for (std::uint32_t i = 0; i < k; ++i)
            if (decoded[i]) msg[i] = std::move(values[i]);
        out.message = std::move(msg);
    }
    return out;
}

} // namespace chunknet
