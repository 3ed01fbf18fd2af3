#include "chunknet/schedule.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace chunknet {

void Schedule::validate() const {
    if (num_links < 1) throw std::invalid_argument("Schedule: num_links must be >= 1");
    for (std::size_t i = 0; i < transmissions.size(); ++i) {
        const auto& t = transmissions[i];
        if (t.link < 1 || t.link > num_links)
            throw std::invalid_argument("Schedule: link " + std::to_string(t.link) +
                                        " out of range [1," + std::to_string(num_links) + "]");
        if (i > 0 && transmissions[i - 1].time >= t.time)
            throw std::invalid_argument("Schedule: times not strictly ascending at index " +
                                        std::to_string(i));
    }
}

std::vector<std::uint32_t> Schedule::per_link_counts() const {
    std::vector<std::uint32_t> counts(num_links, 0);
    for (const auto& t : transmissions) counts[t.link - 1]++;
    return counts;
}

namespace {

// Shared greedy state: pending[i] counts arrivals at node i not yet consumed
// by a link-(i+1) transmission. Because events are processed in ascending
// unique time, every pending arrival is strictly older than the current
// event, so FIFO consumption is exactly "earliest arrival with smaller time".
class ChainMatcher {
public:
    explicit ChainMatcher(std::uint32_t num_links) : pending_(num_links + 1, 0) {}

    // Returns true when the transmission completed a chain (hit link l).
    bool feed(std::uint32_t link) {
        if (link == 1) {
            ++pending_[1];
        } else if (pending_[link - 1] > 0) {
            --pending_[link - 1];
            ++pending_[link];
        } else {
            return false; // nothing to forward; transmission joins no chain
        }
        if (link == pending_.size() - 1) {
            --pending_[link];
            ++completed_;
            return true;
        }
        return false;
    }

    std::uint64_t completed() const { return completed_; }

private:
    std::vector<std::uint64_t> pending_;
    std::uint64_t completed_ = 0;
};

} // namespace

std::uint64_t capacity(const Schedule& s) {
    ChainMatcher matcher(s.num_links);
    for (const auto& t : s.transmissions) matcher.feed(t.link);
    return matcher.completed();
}

namespace {

// Dinic on the explicit time-expanded graph. Small inputs only.
class MaxFlow {
public:
    explicit MaxFlow(int n) : head_(n, -1) {}

    void add_edge(int a, int b, std::int64_t cap) {
        edges_.push_back({b, head_[a], cap});
        head_[a] = static_cast<int>(edges_.size()) - 1;
        edges_.push_back({a, head_[b], 0});
        head_[b] = static_cast<int>(edges_.size()) - 1;
    }

    std::int64_t run(int s, int t) {
        std::int64_t flow = 0;
        while (bfs(s, t)) {
            iter_ = head_;
            while (std::int64_t f = dfs(s, t, std::numeric_limits<std::int64_t>::max()))
                flow += f;
        }
        return flow;
    }

private:
    struct Edge {
        int to;
        int next;
        std::int64_t cap;
    };

    bool bfs(int s, int t) {
        level_.assign(head_.size(), -1);
        std::queue<int> bq;
        level_[s] = 0;
        bq.push(s);
        while (!bq.empty()) {
            int v = bq.front();
            bq.pop();
            for (int e = head_[v]; e >= 0; e = edges_[e].next) {
                if (edges_[e].cap > 0 && level_[edges_[e].to] < 0) {
                    level_[edges_[e].to] = level_[v] + 1;
                    bq.push(edges_[e].to);
                }
            }
        }
        return level_[t] >= 0;
    }

    std::int64_t dfs(int v, int t, std::int64_t limit) {
        if (v == t) return limit;
        for (int& e = iter_[v]; e >= 0; e = edges_[e].next) {
            Edge& ed = edges_[e];
            if (ed.cap > 0 && level_[ed.to] == level_[v] + 1) {
                const std::int64_t f = dfs(ed.to, t, std::min(limit, ed.cap));
                if (f > 0) {
                    ed.cap -= f;
                    edges_[e ^ 1].cap += f;
                    return f;
                }
            }
        }
        return 0;
    }

    std::vector<int> head_;
    std::vector<int> level_;
    std::vector<int> iter_;
    std::vector<Edge> edges_;
};

} // namespace

std::uint64_t capacity_maxflow_oracle(const Schedule& s) {
    s.validate();
    const std::uint32_t l = s.num_links;
    const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;

    // Graph nodes: (network node v, event time). Node 0 additionally owns
    // time 0 (the source at time 0) and node l owns a virtual time-infinity.
    std::vector<std::map<std::uint64_t, int>> times(l + 1);
    int next_id = 0;
    auto node_at = [&](std::uint32_t v, std::uint64_t t) {
        auto [it, fresh] = times[v].try_emplace(t, next_id);
        if (fresh) ++next_id;
        return it->second;
    };

    node_at(0, 0);
    for (const auto& tr : s.transmissions) {
        node_at(tr.link - 1, tr.time);
        node_at(tr.link, tr.time);
    }
    const std::uint64_t t_inf = s.transmissions.empty()
                                    ? 1
                                    : s.transmissions.back().time + 1;
    const int sink = node_at(l, t_inf);
    const int source = times[0].at(0);

    MaxFlow mf(next_id);
    for (std::uint32_t v = 0; v <= l; ++v) {
        // memory edges along each node's timeline
        auto it = times[v].begin();
        if (it == times[v].end()) continue;
        auto prev = it++;
        for (; it != times[v].end(); ++prev, ++it)
            mf.add_edge(prev->second, it->second, inf);
    }
    for (const auto& tr : s.transmissions)
        mf.add_edge(times[tr.link - 1].at(tr.time), times[tr.link].at(tr.time), 1);

    return static_cast<std::uint64_t>(mf.run(source, sink));
}

Schedule generate_schedule(std::uint32_t num_links, std::uint64_t target_n, Rng& rng) {
    if (num_links < 1 || target_n < 1)
        throw std::invalid_argument("generate_schedule: l and target_n must be >= 1");
    Schedule s;
    s.num_links = num_links;
    ChainMatcher matcher(num_links);
    const std::uint64_t cap_ticks = 1000000ULL * target_n;
    std::uint64_t tick = 0;
    while (matcher.completed() < target_n) {
        if (tick >= cap_ticks)
            throw std::runtime_error("generate_schedule: gave up after " +
                                     std::to_string(cap_ticks) + " transmissions");
        ++tick;
        const auto link = static_cast<std::uint32_t>(uniform_below(rng, num_links)) + 1;
        s.transmissions.push_back({link, tick});
        matcher.feed(link);
    }
    return s;
}

std::string schedule_to_text(const Schedule& s) {
    std::string out = "l=" + std::to_string(s.num_links) + "\n";
    for (const auto& t : s.transmissions)
        out += std::to_string(t.link) + "," + std::to_string(t.time) + "\n";
    return out;
}

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& why) {
    throw std::runtime_error("schedule parse error at line " + std::to_string(line_no) +
                             ": " + why);
}

template <typename Int>
Int parse_int(const std::string& token, std::size_t line_no) {
    Int value{};
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) parse_fail(line_no, "bad integer '" + token + "'");
    return value;
}

} // namespace

Schedule schedule_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) parse_fail(1, "missing header");
    ++line_no;
    if (line.rfind("l=", 0) != 0) parse_fail(line_no, "expected header 'l=<int>'");
    Schedule s;
    s.num_links = parse_int<std::uint32_t>(line.substr(2), line_no);
    if (s.num_links < 1) parse_fail(line_no, "l must be >= 1");

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) parse_fail(line_no, "expected 'link,time'");
        Transmission t;
        t.link = parse_int<std::uint32_t>(line.substr(0, comma), line_no);
        t.time = parse_int<std::uint64_t>(line.substr(comma + 1), line_no);
        if (t.link < 1 || t.link > s.num_links) parse_fail(line_no, "link out of range");
        if (!s.transmissions.empty() && s.transmissions.back().time >= t.time)
            parse_fail(line_no, "times not strictly ascending");
        s.transmissions.push_back(t);
    }
    return s;
}

} // namespace chunknet
