#include <fnt/overlay.hpp>

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fnt/errors.hpp>
#include <fnt/linalg.hpp>

namespace fnt {

namespace {

// Parent coordinates by the wiring formula, voidness ignored.
std::pair<NodeCoord, NodeCoord> wire_parents(NodeCoord c) {
    const std::uint32_t half = std::uint32_t(1) << (c.step - 1);
    return {{c.step - 1, c.position & ~half}, {c.step - 1, c.position | half}};
}

std::pair<NodeCoord, NodeCoord> wire_children(NodeCoord c, unsigned log2_size) {
    const std::uint32_t mask = std::uint32_t(1) << c.step;
    (void)log2_size;
    return {{c.step + 1, c.position & ~mask}, {c.step + 1, c.position | mask}};
}

// Edges with >= 1 endpoint in `changed`, both endpoints non-source, counted
// once: an edge is charged to its child endpoint when the child is in the
// set, otherwise to its parent endpoint.
std::uint64_t incident_internal_edges(const std::set<NodeCoord>& changed, unsigned log2_size) {
    std::uint64_t count = 0;
    for (const NodeCoord& c : changed) {
        if (c.step >= 2) count += 2;  // both parent edges, charged here
        if (c.step < log2_size) {
            auto [a, b] = wire_children(c, log2_size);
            if (!changed.contains(a)) ++count;
            if (!changed.contains(b)) ++count;
        }
    }
    return count;
}

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

}  // namespace

OverlayState::OverlayState(unsigned log2_size, std::uint32_t live_sources)
    : graph_(log2_size, live_sources == 0 ? (std::uint32_t(1) << log2_size) : live_sources) {}

std::size_t OverlayState::capacity() const {
    return std::size_t(graph_.log2_size()) << graph_.log2_size();
}

std::vector<NodeCoord> OverlayState::free_positions() const {
    std::vector<NodeCoord> free;
    free.reserve(capacity() - assignment_.size());
    auto it = assignment_.begin();
    for (std::uint32_t s = 1; s <= graph_.log2_size(); ++s) {
        for (std::uint32_t p = 0; p < graph_.size(); ++p) {
            const NodeCoord c{s, p};
            while (it != assignment_.end() && it->first < c) ++it;
            if (it == assignment_.end() || it->first != c) free.push_back(c);
        }
    }
    return free;
}

std::vector<EventRow> OverlayState::take_event_log() {
    std::vector<EventRow> rows;
    rows.swap(event_log_);
    return rows;
}

void OverlayState::log_event(const std::string& type, std::uint64_t changes,
                             std::uint64_t decodable) {
    EventRow row;
    row.event_index = event_clock_;
    row.event_type = type;
    row.n = graph_.size();
    row.k = graph_.live_sources();
    row.terminals = terminals_.size();
    row.connection_changes = changes;
    row.decodable_clients = decodable;
    row.orphans = orphans_.size();
    event_log_.push_back(std::move(row));
}

void OverlayState::refresh_orphans() {
    orphans_.clear();
    for (const auto& [pos, id] : assignment_) {
        if (pos.step < 2) continue;
        auto [a, b] = wire_parents(pos);
        if (!assignment_.contains(a)) orphans_.insert(a);
        if (!assignment_.contains(b)) orphans_.insert(b);
    }
}

std::uint64_t OverlayState::settle(const std::map<NodeCoord, std::string>& before) {
    std::set<NodeCoord> changed;
    for (const auto& [pos, id] : before) {
        auto it = assignment_.find(pos);
        if (it == assignment_.end() || it->second != id) changed.insert(pos);
    }
    for (const auto& [pos, id] : assignment_) {
        auto it = before.find(pos);
        if (it == before.end() || it->second != id) changed.insert(pos);
    }
    refresh_orphans();
    const std::uint64_t changes = incident_internal_edges(changed, graph_.log2_size());
    metrics_.connection_changes += changes;
    metrics_.traffic_units += 2 * changed.size();
    return changes;
}

void OverlayState::join(const std::string& id, std::uint32_t multiplicity) {
    if (multiplicity == 0) throw std::domain_error("fnt: join multiplicity must be positive");
    ++event_clock_;
    while (capacity() - assignment_.size() < multiplicity) do_extend();

    const auto before = assignment_;
    const auto chosen = place_virtual(free_positions(), multiplicity, graph_);
    Terminal& t = terminals_.try_emplace(id, Terminal{id, {}, 0}).first->second;
    t.capacity_weight += multiplicity;
    for (const NodeCoord& c : chosen) {
        assignment_.emplace(c, id);
        t.positions.insert(c);
    }
    const std::uint64_t changes = settle(before);
    metrics_.signalling_events += 1;
    log_event("join", changes, 0);
}

void OverlayState::leave(const std::string& id) {
    auto term = terminals_.find(id);
    if (term == terminals_.end()) throw std::domain_error("fnt: unknown terminal " + id);
    ++event_clock_;

    const auto before = assignment_;
    const std::set<NodeCoord> vacated = std::move(term->second.positions);
    terminals_.erase(term);
    for (const NodeCoord& c : vacated) {
        assignment_.erase(c);
        replicated_.erase(c);
    }

    for (const NodeCoord& hole : vacated) {
        if (hole.step == graph_.log2_size()) continue;  // last-step outputs are not backfilled
        // Donor: the lexicographically last occupied, non-replicated position
        // beyond the hole (pulling a peer forward keeps the overlay compact).
        auto donor = assignment_.end();
        for (auto it = assignment_.rbegin(); it != assignment_.rend(); ++it) {
            if (it->first <= hole) break;
            if (!replicated_.contains(it->first)) {
                donor = std::prev(it.base());
                break;
            }
        }
        if (donor == assignment_.end()) continue;  // unfilled; surfaces as an orphan if wired
        const std::string mover = donor->second;
        Terminal& mt = terminals_.at(mover);
        mt.positions.erase(donor->first);
        mt.positions.insert(hole);
        assignment_.erase(donor);
        assignment_.emplace(hole, mover);
    }

    const std::uint64_t changes = settle(before);
    metrics_.signalling_events += 1;
    log_event("leave", changes, 0);

    while (can_reduce()) do_reduce();
}

void OverlayState::extend() {
    ++event_clock_;
    do_extend();
}

void OverlayState::reduce() {
    ++event_clock_;
    do_reduce();
}

void OverlayState::do_extend() {
    if (graph_.log2_size() >= 16) throw CapacityError("fnt: graph is at its maximum size");
    const std::uint32_t n = graph_.size();
    graph_ = FftGraph(graph_.log2_size() + 1, graph_.live_sources());

    std::map<NodeCoord, std::string> extended;
    for (const auto& [pos, id] : assignment_) {
        const NodeCoord copy{pos.step, pos.position + n};
        extended.emplace(pos, id);
        extended.emplace(copy, id);
        replicated_.insert(copy);
        terminals_.at(id).positions.insert(copy);
    }
    assignment_ = std::move(extended);

    refresh_orphans();
    metrics_.signalling_events += 1;
    log_event("extend", 0, 0);
}

bool OverlayState::can_reduce() const {
    if (graph_.log2_size() < 2) return false;
    const std::uint32_t half = graph_.size() / 2;
    if (graph_.live_sources() > half) return false;
    for (const auto& [pos, id] : assignment_) {
        if (pos.step == graph_.log2_size()) return false;
        if (pos.position >= half) {
            auto primary = assignment_.find({pos.step, pos.position - half});
            if (primary == assignment_.end() || primary->second != id) return false;
        }
    }
    return true;
}

void OverlayState::do_reduce() {
    if (!can_reduce())
        throw CannotReduceError("fnt: occupancy does not fit the halved graph");
    const std::uint32_t half = graph_.size() / 2;
    graph_ = FftGraph(graph_.log2_size() - 1, graph_.live_sources());

    std::map<NodeCoord, std::string> merged;
    std::set<NodeCoord> kept;
    for (const auto& [pos, id] : assignment_) {
        if (pos.position >= half) {
            terminals_.at(id).positions.erase(pos);
            continue;
        }
        merged.emplace(pos, id);
        if (replicated_.contains(pos)) kept.insert(pos);
    }
    assignment_ = std::move(merged);
    replicated_ = std::move(kept);

    refresh_orphans();
    metrics_.signalling_events += 1;
    log_event("reduce", 0, 0);
}

void OverlayState::set_source_count(std::uint32_t live_sources) {
    if (live_sources < 1 || live_sources > graph_.size())
        throw std::domain_error("fnt: live source count out of range");
    ++event_clock_;
    graph_ = FftGraph(graph_.log2_size(), live_sources);
    metrics_.signalling_events += 1;
    log_event("sources", 0, 0);
}

std::uint64_t OverlayState::probe(std::uint32_t clients, std::mt19937_64& rng) {
    ++event_clock_;
    const std::uint32_t k = graph_.live_sources();
    std::vector<NodeCoord> occupied;
    occupied.reserve(assignment_.size());
    for (const auto& [pos, id] : assignment_) occupied.push_back(pos);

    std::uint64_t decodable_count = 0;
    for (std::uint32_t c = 0; c < clients; ++c) {
        if (occupied.size() < k) continue;
        // Partial Fisher-Yates with a plain modulo draw: reproducible across
        // standard libraries, which uniform_int_distribution is not.
        std::vector<NodeCoord> pool = occupied;
        SymbolMatrix held(k, k);
        for (std::uint32_t j = 0; j < k; ++j) {
            const auto pick = j + draw(rng, pool.size() - j);
            std::swap(pool[j], pool[pick]);
            held.row(j) = graph_.coefficient_vector(pool[j]);
        }
        if (field_rank(held) == static_cast<Eigen::Index>(k)) ++decodable_count;
    }
    metrics_.decodable_clients += decodable_count;
    log_event("probe", 0, decodable_count);
    return decodable_count;
}

std::size_t internal_edges(const std::set<NodeCoord>& positions, const FftGraph& g) {
    std::size_t count = 0;
    for (const NodeCoord& c : positions) {
        if (c.step < 2 || c.step > g.log2_size() || c.position >= g.size())
            continue;
        auto [a, b] = wire_parents(c);
        if (positions.contains(a)) ++count;
        if (positions.contains(b)) ++count;
    }
    return count;
}

namespace {

// C(n, m) saturating at `cap`.
std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t m, std::uint64_t cap) {
    if (m > n) return 0;
    m = std::min(m, n - m);
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= m; ++i) {
        r = r * (n - m + i) / i;
        if (r > cap) return cap + 1;
    }
    return r;
}

constexpr std::uint64_t kExhaustiveBudget = 2'000'000;

std::vector<NodeCoord> place_exhaustive(const std::vector<NodeCoord>& free, std::uint32_t m,
                                        const FftGraph& g) {
    std::vector<std::uint32_t> idx(m);
    for (std::uint32_t i = 0; i < m; ++i) idx[i] = i;

    std::vector<NodeCoord> best;
    std::size_t best_edges = 0;
    bool have_best = false;
    while (true) {
        std::set<NodeCoord> candidate;
        for (std::uint32_t i : idx) candidate.insert(free[i]);
        const std::size_t edges = internal_edges(candidate, g);
        if (!have_best || edges > best_edges) {
            have_best = true;
            best_edges = edges;
            best.assign(candidate.begin(), candidate.end());
        }
        // next combination in lexicographic order
        std::int64_t i = m - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] ==
                             free.size() - m + static_cast<std::size_t>(i))
            --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (auto j = static_cast<std::size_t>(i) + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
    return best;
}

// All positions of the j-step cluster fixed by `base` (bits step..step+j-2
// free) starting at `step`, or empty if any of them is taken.
std::vector<NodeCoord> cluster_positions(std::uint32_t step, std::uint32_t j, std::uint32_t base,
                                         const std::set<NodeCoord>& free_set) {
    std::vector<NodeCoord> cluster;
    const std::uint32_t spread = j - 1;
    for (std::uint32_t s = step; s < step + j; ++s) {
        for (std::uint32_t bits = 0; bits < (std::uint32_t(1) << spread); ++bits) {
            std::uint32_t p = base;
            for (std::uint32_t b = 0; b < spread; ++b)
                if (bits & (std::uint32_t(1) << b)) p |= std::uint32_t(1) << (step + b);
            const NodeCoord c{s, p};
            if (!free_set.contains(c)) return {};
            cluster.push_back(c);
        }
    }
    return cluster;
}

std::vector<NodeCoord> place_greedy(const std::vector<NodeCoord>& free, std::uint32_t m,
                                    const FftGraph& g) {
    std::set<NodeCoord> free_set(free.begin(), free.end());
    std::set<NodeCoord> chosen;
    std::uint32_t remaining = m;

    while (remaining > 0) {
        std::uint32_t largest = 1;
        while (largest < g.log2_size() &&
               (largest + 1) * (std::uint32_t(1) << largest) <= remaining)
            ++largest;

        bool placed = false;
        for (std::uint32_t j = largest; j >= 1 && !placed; --j) {
            // Best intact cluster of j steps x 2^(j-1) positions: maximize
            // edges to what is already chosen, tie-break on the
            // lexicographically first instance.
            std::vector<NodeCoord> best;
            std::size_t best_score = 0;
            for (std::uint32_t step = 1; step + j <= g.log2_size() + 1; ++step) {
                std::uint32_t mask = 0;
                for (std::uint32_t b = 0; b + 1 < j; ++b) mask |= std::uint32_t(1) << (step + b);
                for (std::uint32_t base = 0; base < g.size(); ++base) {
                    if (base & mask) continue;
                    auto cluster = cluster_positions(step, j, base, free_set);
                    if (cluster.empty()) continue;
                    std::set<NodeCoord> merged = chosen;
                    merged.insert(cluster.begin(), cluster.end());
                    const std::size_t score = internal_edges(merged, g);
                    if (best.empty() || score > best_score) {
                        best = std::move(cluster);
                        best_score = score;
                    }
                }
            }
            if (!best.empty()) {
                for (const NodeCoord& c : best) {
                    chosen.insert(c);
                    free_set.erase(c);
                }
                remaining -= j * (std::uint32_t(1) << (j - 1));
                placed = true;
            }
            if (j == 1) break;
        }
        if (!placed) {
            const NodeCoord c = *free_set.begin();
            chosen.insert(c);
            free_set.erase(c);
            --remaining;
        }
    }
    return {chosen.begin(), chosen.end()};
}

}  // namespace

std::vector<NodeCoord> place_virtual(const std::vector<NodeCoord>& free_positions,
                                     std::uint32_t m, const FftGraph& g) {
    if (m == 0) throw std::domain_error("fnt: placement multiplicity must be positive");
    if (free_positions.size() < m)
        throw CapacityError("fnt: not enough free positions for placement");
    std::vector<NodeCoord> free = free_positions;
    std::sort(free.begin(), free.end());

    if (binomial_capped(free.size(), m, kExhaustiveBudget) <= kExhaustiveBudget)
        return place_exhaustive(free, m, g);
    return place_greedy(free, m, g);
}

std::vector<ScenarioEvent> parse_scenario(std::istream& in) {
    std::vector<ScenarioEvent> events;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream tokens(line);
        std::string keyword;
        if (!(tokens >> keyword)) continue;

        ScenarioEvent ev;
        ev.line = line_no;
        auto take_number = [&](const char* what) {
            std::int64_t v;
            if (!(tokens >> v) || v < 0)
                throw ScenarioParseError(line_no, std::string("expected non-negative ") + what);
            return static_cast<std::uint64_t>(v);
        };
        if (keyword == "join") {
            ev.kind = ScenarioEvent::Kind::Join;
            if (!(tokens >> ev.terminal)) throw ScenarioParseError(line_no, "expected terminal id");
            ev.value = take_number("multiplicity");
            if (ev.value == 0) throw ScenarioParseError(line_no, "multiplicity must be positive");
        } else if (keyword == "leave") {
            ev.kind = ScenarioEvent::Kind::Leave;
            if (!(tokens >> ev.terminal)) throw ScenarioParseError(line_no, "expected terminal id");
        } else if (keyword == "sources") {
            ev.kind = ScenarioEvent::Kind::Sources;
            ev.value = take_number("source count");
            if (ev.value == 0) throw ScenarioParseError(line_no, "source count must be positive");
        } else if (keyword == "probe") {
            ev.kind = ScenarioEvent::Kind::Probe;
            ev.value = take_number("client count");
        } else {
            throw ScenarioParseError(line_no, "unknown event '" + keyword + "'");
        }
        std::string extra;
        if (tokens >> extra) throw ScenarioParseError(line_no, "trailing tokens");
        events.push_back(std::move(ev));
    }
    return events;
}

ScenarioOutcome run_scenario(OverlayState& state, const std::vector<ScenarioEvent>& events,
                             std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ScenarioOutcome outcome;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const ScenarioEvent& ev = events[i];
        try {
            switch (ev.kind) {
                case ScenarioEvent::Kind::Join:
                    state.join(ev.terminal, static_cast<std::uint32_t>(ev.value));
                    break;
                case ScenarioEvent::Kind::Leave:
                    state.leave(ev.terminal);
                    break;
                case ScenarioEvent::Kind::Sources:
                    state.set_source_count(static_cast<std::uint32_t>(ev.value));
                    break;
                case ScenarioEvent::Kind::Probe:
                    state.probe(static_cast<std::uint32_t>(ev.value), rng);
                    break;
            }
        } catch (const std::exception& e) {
            throw ScenarioParseError(ev.line, e.what());
        }
        for (EventRow& row : state.take_event_log()) {
            row.event_index = i;
            outcome.rows.push_back(std::move(row));
        }
    }
    outcome.metrics = state.metrics();
    return outcome;
}

void write_metrics_csv(std::ostream& os, const std::vector<EventRow>& rows) {
    os << "event_index,event_type,n,k,terminals,connection_changes,decodable_clients,orphans\n";
    for (const EventRow& r : rows) {
        os << r.event_index << "," << r.event_type << "," << r.n << "," << r.k << ","
           << r.terminals << "," << r.connection_changes << "," << r.decodable_clients << ","
           << r.orphans << "\n";
    }
}

}  // namespace fnt
