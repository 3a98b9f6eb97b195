#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fnt/graph.hpp>

namespace fnt {

/// Cumulative simulator counters. All monotone within a run.
struct MetricsRecord {
    std::uint64_t connection_changes = 0;
    std::uint64_t decodable_clients = 0;
    std::uint64_t traffic_units = 0;
    std::uint64_t signalling_events = 0;
};

/// A real peer owning one or more graph positions (virtual multiplicity).
struct Terminal {
    std::string id;
    std::set<NodeCoord> positions;  // pairwise distinct, all steps >= 1
    std::uint32_t capacity_weight = 1;
};

/// One row of the per-event metrics log (the CSV surface).
struct EventRow {
    std::uint64_t event_index = 0;
    std::string event_type;
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::size_t terminals = 0;
    std::uint64_t connection_changes = 0;
    std::uint64_t decodable_clients = 0;
    std::size_t orphans = 0;
};

/// Deterministic single-threaded overlay simulator mapping terminals onto the
/// butterfly graph.
///
/// Every non-source position (u * 2^u of them) is assignable regardless of
/// voidness: with k < n some positions carry identically zero data, but the
/// wiring - and therefore placement, extension and the connection metrics -
/// depends only on the topology, which is what peers signal over.
///
/// connection_changes counts, per event, the edges between non-source
/// positions with at least one endpoint whose owner (terminal id or vacancy)
/// changed. Extension and reduction preserve ownership on every surviving
/// edge by construction, so they record zero: the structural change itself
/// moves no data. traffic_units charges two block transfers (the parent
/// inputs) per position whose owner changed.
///
/// Orphans are derived after every event: vacant positions wired to at least
/// one occupied child, pending replacement.
class OverlayState {
public:
    explicit OverlayState(unsigned log2_size = 2, std::uint32_t live_sources = 0);

    /// Places `multiplicity` positions for `id` (creating or growing the
    /// terminal), extending the graph first while free positions are scarce.
    void join(const std::string& id, std::uint32_t multiplicity);

    /// Vacates all positions of `id`. Each vacated non-last-step position is
    /// backfilled by relocating the occupant of the lexicographically last
    /// non-replicated occupied position beyond it; afterwards the graph is
    /// reduced as long as the occupancy fits.
    void leave(const std::string& id);

    /// Doubles the graph: the owner of (s, p) also owns the copy (s, p + n),
    /// marked replicated; the new last step starts vacant. Zero connection
    /// changes; every terminal's position count exactly doubles.
    void extend();

    /// Inverse of extend. Requires the last step vacant, every occupied copy
    /// co-owned with its primary, and k fitting the halved graph; otherwise
    /// throws CannotReduceError. Zero connection changes.
    void reduce();

    /// Rebuilds the graph with k live sources (occupancy is untouched).
    void set_source_count(std::uint32_t live_sources);

    /// Samples `clients`, each holding the coefficient vectors of k random
    /// occupied positions; returns how many reach rank k.
    std::uint64_t probe(std::uint32_t clients, std::mt19937_64& rng);

    const FftGraph& graph() const { return graph_; }
    const std::map<std::string, Terminal>& terminals() const { return terminals_; }
    const std::map<NodeCoord, std::string>& assignment() const { return assignment_; }
    const std::set<NodeCoord>& replicated() const { return replicated_; }
    const std::set<NodeCoord>& orphans() const { return orphans_; }
    const MetricsRecord& metrics() const { return metrics_; }
    std::uint64_t event_clock() const { return event_clock_; }

    std::size_t capacity() const;                  // u * 2^u non-source positions
    std::vector<NodeCoord> free_positions() const; // ascending (step, position)

    /// Drains rows logged since the last call (nested extend/reduce rows
    /// precede the row of the event that triggered them).
    std::vector<EventRow> take_event_log();

private:
    bool can_reduce() const;
    void do_extend();
    void do_reduce();
    void refresh_orphans();
    std::uint64_t settle(const std::map<NodeCoord, std::string>& before);
    void log_event(const std::string& type, std::uint64_t changes, std::uint64_t decodable);

    FftGraph graph_;
    std::map<std::string, Terminal> terminals_;
    std::map<NodeCoord, std::string> assignment_;
    std::set<NodeCoord> replicated_;
    std::set<NodeCoord> orphans_;
    MetricsRecord metrics_;
    std::uint64_t event_clock_ = 0;
    std::vector<EventRow> event_log_;
};

/// Number of butterfly edges with both endpoints in `positions` (edges to the
/// source step never qualify since source positions are not assignable).
std::size_t internal_edges(const std::set<NodeCoord>& positions, const FftGraph& g);

/// Picks m free positions maximizing the internal edge count. Small instances
/// are solved exhaustively (lexicographically smallest optimum); large ones
/// greedily pack complete sub-FFT clusters (j steps x 2^(j-1) positions),
/// then smaller clusters adjacent to what is already chosen. Deterministic.
std::vector<NodeCoord> place_virtual(const std::vector<NodeCoord>& free_positions,
                                     std::uint32_t m, const FftGraph& g);

struct ScenarioEvent {
    enum class Kind { Join, Leave, Sources, Probe };
    Kind kind = Kind::Probe;
    std::string terminal;
    std::uint64_t value = 0;  // multiplicity / source count / client count
    std::size_t line = 0;     // 1-based scenario line
};

/// Parses the textual scenario format: one event per line, `#` comments.
///   join <terminal-id> <m> | leave <terminal-id> | sources <k> | probe <clients>
std::vector<ScenarioEvent> parse_scenario(std::istream& in);

struct ScenarioOutcome {
    MetricsRecord metrics;
    std::vector<EventRow> rows;
};

/// Replays events against `state`. Deterministic for fixed (events, seed).
ScenarioOutcome run_scenario(OverlayState& state, const std::vector<ScenarioEvent>& events,
                             std::uint64_t seed);

void write_metrics_csv(std::ostream& os, const std::vector<EventRow>& rows);

}  // namespace fnt
