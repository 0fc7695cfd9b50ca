#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mvc/schemes.hpp"

namespace mvc {

class ScheduleError : public std::runtime_error {
public:
	ScheduleError(unsigned line, const std::string& what)
		: std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
	unsigned line() const noexcept { return line_; }

private:
	unsigned line_;
};

struct ScheduleHeader {
	unsigned n = 0;
	unsigned c_w = 0;
	unsigned c_r = 0;
	unsigned nu = 1;
	unsigned K = 8;
	unsigned radius = 0;
	unsigned f = 0;
	std::uint64_t seed = 1;

	CorrelationModel model() const { return {K, radius, nu}; }
	friend bool operator==(const ScheduleHeader&, const ScheduleHeader&) = default;
};

enum class EventKind { Write, Arrive, Crash, Read };

// Times are integers; an arrival may be "never". Servers are 0-based here and
// 1-based in the text format.
struct Event {
	EventKind kind = EventKind::Write;
	std::optional<std::uint64_t> time;
	VersionIndex version = 0;             // write, arrive
	ServerIndex server = 0;               // arrive, crash
	unsigned reader = 0;                  // read
	std::vector<ServerIndex> responders;  // read; empty: every live server
	unsigned line = 0;                    // source line, 0 if built in code

	friend bool operator==(const Event& a, const Event& b) {
		return a.kind == b.kind && a.time == b.time && a.version == b.version && a.server == b.server &&
		       a.reader == b.reader && a.responders == b.responders;
	}
};

// Text format, one record per line, '#' starts a comment:
//   header n=6 c_w=5 c_r=5 nu=2 K=8 radius=1 f=0 seed=1
//   write t=0 version=1
//   arrive t=1 version=1 server=3      (t=never allowed)
//   crash t=2 server=4
//   read t=5 reader=1 responders=2,3,4,5,6
struct Schedule {
	ScheduleHeader header;
	std::vector<Event> events;

	// Throws ScheduleError.
	void validate() const;
	std::string to_text() const;
	static Schedule parse(std::string_view text);
	static Schedule load(const std::string& path);

	friend bool operator==(const Schedule&, const Schedule&) = default;
};

struct WriteRecord {
	VersionIndex version = 0;
	std::uint64_t start = 0;
	std::optional<std::uint64_t> completed;  // time of the c_W-th arrival
	unsigned arrivals = 0;
};

struct ReadRecord {
	std::uint64_t time = 0;
	unsigned reader = 0;
	std::vector<ServerIndex> responders;  // the c_R servers decoded from, sorted
	SystemState state;                    // every server's received set at read time
	DecodeStatus status = DecodeStatus::Null;
	std::optional<VersionIndex> decoded_version;
	std::optional<VersionIndex> latest_complete;  // writes finished by the read's start
	bool consistent = false;
	// Returned a later version whose write had not completed; allowed but flagged.
	bool incomplete_later = false;
	std::string detail;
};

struct ExecutionTrace {
	std::string scheme;
	ScheduleHeader header;
	std::vector<WriteRecord> writes;
	std::vector<ReadRecord> reads;

	unsigned inconsistent_reads() const;
	std::string to_text() const;
};

// Message values come from sample_tuple(model, derive_seed(seed, {sim tag})).
// The scheme must read from c_R servers (see make_quorum_scheme).
ExecutionTrace run_simulation(const MvcScheme& scheme, const Schedule& schedule);
std::uint64_t simulation_tuple_seed(std::uint64_t schedule_seed);

struct SearchParams {
	unsigned n = 4;
	unsigned c_w = 3;
	unsigned c_r = 3;
	unsigned nu = 2;
	unsigned K = 8;
	unsigned radius = 1;
	std::uint64_t seed = 1;
	unsigned tuples = 4;  // message draws tried per schedule shape
};

struct SearchResult {
	std::optional<Schedule> witness;
	std::optional<ExecutionTrace> trace;
	std::uint64_t schedules_examined = 0;
	bool found() const noexcept { return witness.has_value(); }
};

// Tries every schedule of at most `depth` events (writes, arrivals, one read)
// in order of increasing length and returns the first inconsistent one.
// depth <= 12.
SearchResult adversarial_schedule_search(const MvcScheme& scheme, const SearchParams& params, unsigned depth);

} // namespace mvc
