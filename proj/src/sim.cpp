#include "mvc/sim.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace mvc {

namespace {

constexpr std::uint64_t kSimTag = 0x73696d;  // "sim"

std::string_view trim(std::string_view s) {
	while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
		s.remove_prefix(1);
	}
	while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
		s.remove_suffix(1);
	}
	return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
	std::vector<std::string_view> out;
	while (true) {
		const auto k = s.find(sep);
		out.push_back(s.substr(0, k));
		if (k == std::string_view::npos) {
			return out;
		}
		s.remove_prefix(k + 1);
	}
}

std::uint64_t parse_uint(std::string_view v, unsigned line, std::string_view key) {
	std::uint64_t x = 0;
	const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
	if (ec != std::errc{} || end != v.data() + v.size() || v.empty()) {
		throw ScheduleError(line, "bad value '" + std::string(v) + "' for " + std::string(key));
	}
	return x;
}

unsigned parse_small(std::string_view v, unsigned line, std::string_view key) {
	const auto x = parse_uint(v, line, key);
	if (x > 1u << 20) {
		throw ScheduleError(line, std::string(key) + " is too large");
	}
	return static_cast<unsigned>(x);
}

ServerIndex parse_server(std::string_view v, unsigned line) {
	const unsigned s = parse_small(v, line, "server");
	if (s == 0) {
		throw ScheduleError(line, "servers are numbered from 1");
	}
	return s - 1;
}

struct Record {
	std::string_view kind;
	std::map<std::string, std::string_view, std::less<>> fields;
	unsigned line;

	std::string_view get(std::string_view key) const {
		const auto it = fields.find(key);
		if (it == fields.end()) {
			throw ScheduleError(line, std::string(kind) + " needs " + std::string(key) + "=");
		}
		return it->second;
	}
	void only(std::initializer_list<std::string_view> allowed) const {
		for (const auto& [k, v] : fields) {
			if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
				throw ScheduleError(line, "unknown field '" + k + "' in " + std::string(kind));
			}
		}
	}
};

const char* kind_name(EventKind k) {
	switch (k) {
	case EventKind::Write:
		return "write";
	case EventKind::Arrive:
		return "arrive";
	case EventKind::Crash:
		return "crash";
	case EventKind::Read:
		return "read";
	}
	return "?";
}

std::string server_list(const std::vector<ServerIndex>& servers) {
	std::string out;
	for (std::size_t k = 0; k < servers.size(); ++k) {
		out += (k ? "," : "") + std::to_string(servers[k] + 1);
	}
	return out;
}

std::string compact_state(const SystemState& s) {
	std::string out;
	for (unsigned i = 0; i < s.n(); ++i) {
		out += (i ? "|" : "") + s.at(i).to_string();
	}
	return out;
}

std::string opt(const std::optional<std::uint64_t>& v) {
	return v ? std::to_string(*v) : "never";
}

std::string header_fields(const ScheduleHeader& h) {
	std::ostringstream out;
	out << "n=" << h.n << " c_w=" << h.c_w << " c_r=" << h.c_r << " nu=" << h.nu << " K=" << h.K
	    << " radius=" << h.radius << " f=" << h.f << " seed=" << h.seed;
	return out.str();
}

} // namespace

void Schedule::validate() const {
	const auto& h = header;
	if (h.n == 0) {
		throw ScheduleError(0, "header needs n >= 1");
	}
	if (h.f >= h.n) {
		throw ScheduleError(0, "need f < n");
	}
	if (h.c_w == 0 || h.c_r == 0 || h.c_w > h.n - h.f || h.c_r > h.n - h.f) {
		throw ScheduleError(0, "need 1 <= c_w, c_r <= n - f");
	}
	if (h.nu == 0 || h.nu > 31) {
		throw ScheduleError(0, "need 1 <= nu <= 31");
	}
	if (h.K == 0 || h.K > BitVec::kMaxBits || h.radius > h.K) {
		throw ScheduleError(0, "need 1 <= K <= " + std::to_string(BitVec::kMaxBits) + " and radius <= K");
	}
	std::vector<std::optional<std::uint64_t>> write_time(h.nu + 1);
	std::vector<bool> arrived(static_cast<std::size_t>(h.nu + 1) * h.n, false);
	std::vector<bool> crashed(h.n, false);
	unsigned crashes = 0;
	VersionIndex last_version = 0;
	std::uint64_t last_write = 0;
	for (const auto& e : events) {
		if (e.kind != EventKind::Arrive && !e.time) {
			throw ScheduleError(e.line, std::string(kind_name(e.kind)) + " cannot happen at t=never");
		}
		switch (e.kind) {
		case EventKind::Write:
			if (e.version != last_version + 1) {
				throw ScheduleError(e.line, "writes must number versions 1, 2, ... in order");
			}
			if (e.version > h.nu) {
				throw ScheduleError(e.line, "more than nu=" + std::to_string(h.nu) + " writes");
			}
			if (last_version > 0 && *e.time < last_write) {
				throw ScheduleError(e.line, "writes must start in version order");
			}
			write_time[e.version] = e.time;
			last_version = e.version;
			last_write = *e.time;
			break;
		case EventKind::Arrive: {
			if (e.version == 0 || e.version > h.nu || !write_time[e.version]) {
				throw ScheduleError(e.line, "arrival of unwritten version " + std::to_string(e.version));
			}
			if (e.server >= h.n) {
				throw ScheduleError(e.line, "no server " + std::to_string(e.server + 1));
			}
			if (e.time && *e.time < *write_time[e.version]) {
				throw ScheduleError(e.line, "arrival before its write starts");
			}
			const std::size_t slot = static_cast<std::size_t>(e.version) * h.n + e.server;
			if (arrived[slot]) {
				throw ScheduleError(e.line, "duplicate arrival");
			}
			arrived[slot] = true;
			break;
		}
		case EventKind::Crash:
			if (e.server >= h.n) {
				throw ScheduleError(e.line, "no server " + std::to_string(e.server + 1));
			}
			if (crashed[e.server]) {
				throw ScheduleError(e.line, "server crashes twice");
			}
			crashed[e.server] = true;
			if (++crashes > h.f) {
				throw ScheduleError(e.line, "more than f=" + std::to_string(h.f) + " crashes");
			}
			break;
		case EventKind::Read: {
			std::vector<bool> seen(h.n, false);
			for (auto s : e.responders) {
				if (s >= h.n) {
					throw ScheduleError(e.line, "no server " + std::to_string(s + 1));
				}
				if (seen[s]) {
					throw ScheduleError(e.line, "repeated responder");
				}
				seen[s] = true;
			}
			if (!e.responders.empty() && e.responders.size() < h.c_r) {
				throw ScheduleError(e.line, "fewer than c_r responders");
			}
			break;
		}
		}
	}
}

std::string Schedule::to_text() const {
	std::ostringstream out;
	out << "header " << header_fields(header) << '\n';
	for (const auto& e : events) {
		out << kind_name(e.kind) << " t=" << opt(e.time);
		switch (e.kind) {
		case EventKind::Write:
			out << " version=" << e.version;
			break;
		case EventKind::Arrive:
			out << " version=" << e.version << " server=" << e.server + 1;
			break;
		case EventKind::Crash:
			out << " server=" << e.server + 1;
			break;
		case EventKind::Read:
			out << " reader=" << e.reader;
			if (!e.responders.empty()) {
				out << " responders=" << server_list(e.responders);
			}
			break;
		}
		out << '\n';
	}
	return out.str();
}

Schedule Schedule::parse(std::string_view text) {
	Schedule s;
	bool have_header = false;
	unsigned line_no = 0;
	for (auto raw : split(text, '\n')) {
		++line_no;
		if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
			raw = raw.substr(0, hash);
		}
		const auto line = trim(raw);
		if (line.empty()) {
			continue;
		}
		Record r{{}, {}, line_no};
		bool first = true;
		for (auto tok : split(line, ' ')) {
			tok = trim(tok);
			if (tok.empty()) {
				continue;
			}
			if (first) {
				r.kind = tok;
				first = false;
				continue;
			}
			const auto eq = tok.find('=');
			if (eq == std::string_view::npos || eq == 0) {
				throw ScheduleError(line_no, "expected key=value, got '" + std::string(tok) + "'");
			}
			if (!r.fields.emplace(std::string(tok.substr(0, eq)), tok.substr(eq + 1)).second) {
				throw ScheduleError(line_no, "repeated field '" + std::string(tok.substr(0, eq)) + "'");
			}
		}
		if (r.kind == "header") {
			if (have_header) {
				throw ScheduleError(line_no, "second header");
			}
			r.only({"n", "c_w", "c_r", "nu", "K", "radius", "f", "seed"});
			auto& h = s.header;
			h.n = parse_small(r.get("n"), line_no, "n");
			h.c_w = parse_small(r.get("c_w"), line_no, "c_w");
			h.c_r = parse_small(r.get("c_r"), line_no, "c_r");
			h.nu = parse_small(r.get("nu"), line_no, "nu");
			h.K = parse_small(r.get("K"), line_no, "K");
			h.radius = parse_small(r.get("radius"), line_no, "radius");
			h.f = r.fields.count("f") ? parse_small(r.get("f"), line_no, "f") : 0;
			h.seed = r.fields.count("seed") ? parse_uint(r.get("seed"), line_no, "seed") : 1;
			have_header = true;
			continue;
		}
		if (!have_header) {
			throw ScheduleError(line_no, "the first record must be the header");
		}
		Event e;
		e.line = line_no;
		const auto t = r.get("t");
		if (t != "never") {
			e.time = parse_uint(t, line_no, "t");
		}
		if (r.kind == "write") {
			r.only({"t", "version"});
			e.kind = EventKind::Write;
			e.version = parse_small(r.get("version"), line_no, "version");
		} else if (r.kind == "arrive") {
			r.only({"t", "version", "server"});
			e.kind = EventKind::Arrive;
			e.version = parse_small(r.get("version"), line_no, "version");
			e.server = parse_server(r.get("server"), line_no);
		} else if (r.kind == "crash") {
			r.only({"t", "server"});
			e.kind = EventKind::Crash;
			e.server = parse_server(r.get("server"), line_no);
		} else if (r.kind == "read") {
			r.only({"t", "reader", "responders"});
			e.kind = EventKind::Read;
			e.reader = parse_small(r.get("reader"), line_no, "reader");
			if (r.fields.count("responders")) {
				for (auto v : split(r.get("responders"), ',')) {
					e.responders.push_back(parse_server(v, line_no));
				}
			}
		} else {
			throw ScheduleError(line_no, "unknown record '" + std::string(r.kind) + "'");
		}
		s.events.push_back(std::move(e));
	}
	if (!have_header) {
		throw ScheduleError(0, "missing header");
	}
	s.validate();
	return s;
}

Schedule Schedule::load(const std::string& path) {
	std::ifstream in(path);
	if (!in) {
		throw ScheduleError(0, "cannot open " + path);
	}
	std::ostringstream text;
	text << in.rdbuf();
	return parse(text.str());
}

unsigned ExecutionTrace::inconsistent_reads() const {
	return static_cast<unsigned>(std::count_if(reads.begin(), reads.end(), [](const auto& r) { return !r.consistent; }));
}

std::string ExecutionTrace::to_text() const {
	std::ostringstream out;
	out << "trace scheme=" << scheme << ' ' << header_fields(header) << '\n';
	for (const auto& w : writes) {
		out << "write version=" << w.version << " start=" << w.start << " complete=" << opt(w.completed)
		    << " arrivals=" << w.arrivals << '\n';
	}
	for (const auto& r : reads) {
		out << "read t=" << r.time << " reader=" << r.reader << " responders=" << server_list(r.responders)
		    << " state=" << compact_state(r.state) << " status=" << to_string(r.status)
		    << " version=" << (r.decoded_version ? std::to_string(*r.decoded_version) : "none")
		    << " latest_complete=" << (r.latest_complete ? std::to_string(*r.latest_complete) : "none")
		    << " consistent=" << (r.consistent ? "yes" : "no")
		    << " flag=" << (r.incomplete_later ? "incomplete-later" : "none") << '\n';
	}
	out << "summary reads=" << reads.size() << " inconsistent=" << inconsistent_reads() << '\n';
	return out.str();
}

std::uint64_t simulation_tuple_seed(std::uint64_t schedule_seed) {
	return derive_seed(schedule_seed, {kSimTag});
}

ExecutionTrace run_simulation(const MvcScheme& scheme, const Schedule& schedule) {
	schedule.validate();
	const auto& h = schedule.header;
	if (scheme.n() != h.n || scheme.nu() != h.nu || scheme.K() != h.K || scheme.model().radius != h.radius) {
		throw std::domain_error("scheme parameters do not match the schedule header");
	}
	if (scheme.read_arity() != h.c_r) {
		throw std::domain_error("scheme reads from " + std::to_string(scheme.read_arity()) +
		                        " servers but the schedule has c_r=" + std::to_string(h.c_r));
	}
	const auto tuple = sample_tuple(h.model(), simulation_tuple_seed(h.seed));

	// Stable order by (time, kind); never-arrivals drop out.
	std::vector<const Event*> order;
	for (const auto& e : schedule.events) {
		if (e.time) {
			order.push_back(&e);
		}
	}
	std::stable_sort(order.begin(), order.end(), [](const Event* a, const Event* b) {
		return std::make_pair(*a->time, static_cast<int>(a->kind)) < std::make_pair(*b->time, static_cast<int>(b->kind));
	});

	ExecutionTrace trace;
	trace.scheme = scheme.name();
	trace.header = h;
	std::vector<VersionSet> received(h.n);
	std::vector<bool> alive(h.n, true);
	for (const Event* e : order) {
		switch (e->kind) {
		case EventKind::Write:
			trace.writes.push_back({e->version, *e->time, std::nullopt, 0});
			break;
		case EventKind::Arrive: {
			if (!alive[e->server]) {
				break;
			}
			received[e->server].insert(e->version);
			auto& w = trace.writes.at(e->version - 1);
			if (++w.arrivals == h.c_w) {
				w.completed = *e->time;
			}
			break;
		}
		case EventKind::Crash:
			alive[e->server] = false;
			break;
		case EventKind::Read: {
			ReadRecord r;
			r.time = *e->time;
			r.reader = e->reader;
			r.state = SystemState(received, h.c_w);
			for (const auto& w : trace.writes) {
				if (w.completed) {
					r.latest_complete = w.version;
				}
			}
			std::vector<ServerIndex> candidates = e->responders;
			if (candidates.empty()) {
				for (ServerIndex i = 0; i < h.n; ++i) {
					candidates.push_back(i);
				}
			}
			for (auto i : candidates) {
				if (alive[i] && r.responders.size() < h.c_r) {
					r.responders.push_back(i);
				}
			}
			std::sort(r.responders.begin(), r.responders.end());
			DecodeResult result;
			if (r.responders.size() < h.c_r) {
				result = DecodeResult::error("fewer than c_r live responders");
			} else {
				std::vector<StoredSymbol> symbols;
				for (auto i : r.responders) {
					symbols.push_back(scheme.encode_tuple(i, received[i], tuple));
				}
				try {
					result = scheme.decode(r.responders, r.state, symbols);
				} catch (const std::exception& ex) {
					result = DecodeResult::error(ex.what());
				}
			}
			r.status = result.status;
			r.detail = result.detail;
			if (result.status == DecodeStatus::Decoded && result.value.size() == h.K) {
				// Only versions already issued can be the answer.
				const auto issued = static_cast<VersionIndex>(trace.writes.size());
				for (VersionIndex u = issued; u >= 1 && !r.decoded_version; --u) {
					if (tuple.versions[u - 1] == result.value) {
						r.decoded_version = u;
					}
				}
			}
			if (r.latest_complete) {
				r.consistent = r.decoded_version && *r.decoded_version >= *r.latest_complete;
			} else {
				// Nothing is complete yet, so no outcome is wrong.
				r.consistent = true;
			}
			if (r.consistent && r.decoded_version) {
				const auto& w = trace.writes.at(*r.decoded_version - 1);
				r.incomplete_later = !w.completed;
			}
			trace.reads.push_back(std::move(r));
			break;
		}
		}
	}
	return trace;
}

SearchResult adversarial_schedule_search(const MvcScheme& scheme, const SearchParams& p, unsigned depth) {
	if (depth > 12) {
		throw std::domain_error("search depth is limited to 12 events");
	}
	if (p.n == 0 || p.n * p.nu > 24) {
		throw std::domain_error("search needs 1 <= n*nu <= 24");
	}
	SearchResult out;
	// (event count, writes, arrival pattern); bit i*w + (v-1) marks v at server i.
	struct Shape {
		unsigned events;
		unsigned writes;
		std::uint32_t pattern;
	};
	std::vector<Shape> shapes;
	for (unsigned w = 1; w <= p.nu; ++w) {
		const std::uint32_t patterns = std::uint32_t{1} << (p.n * w);
		for (std::uint32_t pattern = 0; pattern < patterns; ++pattern) {
			const unsigned events = w + static_cast<unsigned>(__builtin_popcount(pattern)) + 1;
			if (events <= depth) {
				shapes.push_back({events, w, pattern});
			}
		}
	}
	std::stable_sort(shapes.begin(), shapes.end(), [](const Shape& a, const Shape& b) { return a.events < b.events; });

	std::vector<std::vector<ServerIndex>> readers;
	{
		std::vector<ServerIndex> pick(p.c_r);
		for (unsigned k = 0; k < p.c_r; ++k) {
			pick[k] = k;
		}
		for (;;) {
			readers.push_back(pick);
			int k = static_cast<int>(p.c_r) - 1;
			while (k >= 0 && pick[k] == p.n - p.c_r + k) {
				--k;
			}
			if (k < 0) {
				break;
			}
			++pick[k];
			for (unsigned l = k + 1; l < p.c_r; ++l) {
				pick[l] = pick[l - 1] + 1;
			}
		}
	}

	for (const auto& shape : shapes) {
		Schedule s;
		s.header = {p.n, p.c_w, p.c_r, p.nu, p.K, p.radius, 0, 0};
		for (VersionIndex v = 1; v <= shape.writes; ++v) {
			Event e;
			e.kind = EventKind::Write;
			e.time = v - 1;
			e.version = v;
			s.events.push_back(e);
		}
		for (VersionIndex v = 1; v <= shape.writes; ++v) {
			for (ServerIndex i = 0; i < p.n; ++i) {
				if ((shape.pattern >> (i * shape.writes + v - 1)) & 1u) {
					Event e;
					e.kind = EventKind::Arrive;
					e.time = shape.writes;
					e.version = v;
					e.server = i;
					s.events.push_back(e);
				}
			}
		}
		Event read;
		read.kind = EventKind::Read;
		read.time = shape.writes + 1;
		read.reader = 1;
		s.events.push_back(read);
		for (const auto& responders : readers) {
			s.events.back().responders = responders;
			for (unsigned k = 0; k < p.tuples; ++k) {
				s.header.seed = derive_seed(p.seed, {k});
				++out.schedules_examined;
				auto trace = run_simulation(scheme, s);
				if (trace.inconsistent_reads() > 0) {
					out.witness = s;
					out.trace = std::move(trace);
					return out;
				}
			}
		}
	}
	return out;
}

} // namespace mvc
