#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mvc/binning.hpp"
#include "mvc/bounds.hpp"
#include "mvc/registry.hpp"
#include "mvc/sim.hpp"
#include "mvc/verifier.hpp"

namespace mvc::cli {

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::invalid_argument {
	using std::invalid_argument::invalid_argument;
};

struct Report {
	std::string command;
	Json params = Json::object();
	std::vector<std::string> columns;
	std::vector<Json> rows;
	std::vector<std::string> notes;
	Json details;
};

std::string cell(const Json& v) {
	if (v.is_null()) {
		return "-";
	}
	if (v.is_boolean()) {
		return v.get<bool>() ? "yes" : "no";
	}
	if (v.is_number_float()) {
		char buf[64];
		std::snprintf(buf, sizeof buf, "%.6f", v.get<double>());
		return buf;
	}
	if (v.is_string()) {
		return v.get<std::string>();
	}
	return v.dump();
}

std::string csv_escape(const std::string& s) {
	if (s.find_first_of(",\"\n") == std::string::npos) {
		return s;
	}
	std::string out = "\"";
	for (char ch : s) {
		out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
	}
	return out + "\"";
}

std::string echo(const Report& r) {
	std::string line = "# mvc " + r.command;
	for (const auto& [k, v] : r.params.items()) {
		if (v.is_number_float()) {
			char buf[64];
			std::snprintf(buf, sizeof buf, "%.10g", v.get<double>());
			line += " " + k + "=" + buf;
		} else {
			line += " " + k + "=" + cell(v);
		}
	}
	return line;
}

void render(const Report& r, const std::string& format, std::ostream& out) {
	if (format == "structured") {
		Json j{{"command", r.command}, {"params", r.params}};
		j["rows"] = r.rows;
		j["notes"] = r.notes;
		if (!r.details.is_null()) {
			j["details"] = r.details;
		}
		out << j.dump(2) << '\n';
		return;
	}
	out << echo(r) << '\n';
	if (format == "csv") {
		for (std::size_t k = 0; k < r.columns.size(); ++k) {
			out << (k ? "," : "") << csv_escape(r.columns[k]);
		}
		out << '\n';
		for (const auto& row : r.rows) {
			for (std::size_t k = 0; k < r.columns.size(); ++k) {
				out << (k ? "," : "") << csv_escape(cell(row.value(r.columns[k], Json())));
			}
			out << '\n';
		}
		for (const auto& note : r.notes) {
			out << "# " << note << '\n';
		}
		return;
	}
	std::vector<std::size_t> width(r.columns.size());
	std::vector<std::vector<std::string>> cells;
	for (std::size_t k = 0; k < r.columns.size(); ++k) {
		width[k] = r.columns[k].size();
	}
	for (const auto& row : r.rows) {
		auto& line = cells.emplace_back();
		for (std::size_t k = 0; k < r.columns.size(); ++k) {
			line.push_back(cell(row.value(r.columns[k], Json())));
			width[k] = std::max(width[k], line.back().size());
		}
	}
	auto print = [&](const std::vector<std::string>& line) {
		std::string s;
		for (std::size_t k = 0; k < line.size(); ++k) {
			s += line[k];
			if (k + 1 < line.size()) {
				s += std::string(width[k] - line[k].size() + 2, ' ');
			}
		}
		out << s << '\n';
	};
	print(r.columns);
	for (const auto& line : cells) {
		print(line);
	}
	for (const auto& note : r.notes) {
		out << note << '\n';
	}
}

// ---- parameters --------------------------------------------------------------

struct Resolved {
	unsigned n = 0;
	unsigned c = 0;
	unsigned c_w = 0;
	unsigned c_r = 0;
	bool quorum = false;
	CorrelationModel model;
};

CorrelationModel resolve_model(const RunConfig& cfg, unsigned K, Report& r, bool echo_params = true) {
	if (cfg.radius >= 0 && !cfg.delta.empty()) {
		throw UsageError("--radius and --delta are mutually exclusive");
	}
	if (!cfg.delta.empty()) {
		const auto [p, q] = parse_rational(cfg.delta);
		const auto model = CorrelationModel::from_rational(p, q, K, cfg.nu);
		if (echo_params) {
			r.params["delta"] = std::to_string(p) + "/" + std::to_string(q);
			r.params["radius"] = model.radius;
			r.notes.push_back("delta " + std::to_string(p) + "/" + std::to_string(q) + " -> radius floor(delta*K) = " +
			                  std::to_string(model.radius));
		}
		return model;
	}
	const unsigned radius = cfg.radius < 0 ? 1u : static_cast<unsigned>(cfg.radius);
	if (echo_params) {
		r.params["radius"] = radius;
	}
	return {K, radius, cfg.nu};
}

Resolved resolve(const RunConfig& cfg, Report& r) {
	Resolved m;
	m.n = cfg.n;
	if (cfg.c != 0 && (cfg.c_w != 0 || cfg.c_r != 0)) {
		throw UsageError("--c and --c-w/--c-r are mutually exclusive");
	}
	if ((cfg.c_w == 0) != (cfg.c_r == 0)) {
		throw UsageError("--c-w and --c-r must be given together");
	}
	r.params["n"] = cfg.n;
	if (cfg.c_w != 0) {
		if (cfg.c_w > cfg.n || cfg.c_r > cfg.n || cfg.c_w + cfg.c_r <= cfg.n) {
			throw UsageError("quorums need c_w, c_r <= n and c_w + c_r > n");
		}
		m.quorum = true;
		m.c_w = cfg.c_w;
		m.c_r = cfg.c_r;
		m.c = cfg.c_w + cfg.c_r - cfg.n;
		r.params["c_w"] = m.c_w;
		r.params["c_r"] = m.c_r;
	} else {
		if (cfg.c == 0) {
			throw UsageError("give --c, or --c-w and --c-r");
		}
		m.c = cfg.c;
	}
	r.params["c"] = m.c;
	r.params["nu"] = cfg.nu;
	r.params["K"] = cfg.K;
	m.model = resolve_model(cfg, cfg.K, r);
	return m;
}

double epsilon_or(const RunConfig& cfg, double fallback) {
	return cfg.epsilon < 0 ? fallback : cfg.epsilon;
}

BinningKind kind_of(const RunConfig& cfg) {
	return binning_kind_from_string(cfg.kind);
}

SchemeRequest request_for(const RunConfig& cfg, const std::string& name, const Resolved& m, double eps) {
	SchemeRequest req;
	req.name = name;
	req.config = SchemeConfig(m.n, m.c, m.model);
	req.epsilon = eps;
	req.binning.kind = kind_of(cfg);
	req.binning.seed = cfg.seed;
	return req;
}

std::string servers_text(const std::vector<ServerIndex>& servers) {
	std::string s;
	for (std::size_t k = 0; k < servers.size(); ++k) {
		s += (k ? "," : "") + std::to_string(servers[k] + 1);
	}
	return s;
}

// ---- commands ----------------------------------------------------------------

int cmd_cost(const RunConfig& cfg, Report& r) {
	const auto m = resolve(cfg, r);
	const double eps = epsilon_or(cfg, 0.25);
	r.params["epsilon"] = eps;
	r.params["seed"] = cfg.seed;
	r.columns = {"scheme", "formula", "integer_bound", "padded_K", "measured", "overhead", "within_bound", "search",
	             "expression"};
	std::vector<std::string> names = cfg.schemes;
	if (names.empty()) {
		names = {"replication", "mds", "delta", "rs-update", "binning"};
	}
	int code = kPass;
	for (const auto& name : names) {
		const auto scheme = make_scheme(request_for(cfg, name, m, eps));
		const auto a = scheme->analytic_cost();
		const auto w = worst_case_cost(*scheme, {cfg.cap, cfg.random_tuples, cfg.seed});
		const bool ok = static_cast<double>(w.measured_bits) <= a.integer_bound + 1e-9;
		if (!ok) {
			code = kFailure;
		}
		r.rows.push_back({{"scheme", name},
		                  {"formula", a.formula},
		                  {"integer_bound", a.integer_bound},
		                  {"padded_K", a.padded_K},
		                  {"measured", w.measured_bits},
		                  {"overhead", w.overhead_bits},
		                  {"within_bound", ok},
		                  {"search", w.exhaustive ? "exhaustive"
		                                          : "adversarial+random(" + std::to_string(w.tuples_examined) + ")"},
		                  {"expression", a.expression}});
	}
	BoundParams bp{m.n, m.c, cfg.nu, cfg.K, m.model.radius, eps};
	if (std::ldexp(eps, static_cast<int>(cfg.nu * m.n)) >= 1) {
		bp.epsilon = 0;
		r.notes.push_back("lower bound needs epsilon < 2^-(nu*n); evaluated at epsilon = 0");
	}
	r.rows.push_back({{"scheme", "lower-bound"},
	                  {"formula", lower_bound_general(bp)},
	                  {"integer_bound", nullptr},
	                  {"padded_K", cfg.K},
	                  {"measured", nullptr},
	                  {"overhead", nullptr},
	                  {"within_bound", nullptr},
	                  {"search", "-"},
	                  {"expression", "(K + (nu-1)*log2 Vol + log2(1 - eps*2^(nu*n)) - log2(C(c+nu-1,nu)*nu!))/(c+nu-1)"}});
	return code;
}

int cmd_verify(const RunConfig& cfg, Report& r) {
	const auto m = resolve(cfg, r);
	const double eps = epsilon_or(cfg, 0.25);
	r.params["scheme"] = cfg.scheme;
	if (cfg.scheme == "binning") {
		r.params["epsilon"] = eps;
		r.params["kind"] = cfg.kind;
	}
	r.params["mode"] = cfg.mode;
	r.params["seed"] = cfg.seed;
	VerifyOptions opts;
	opts.mode = verify_mode_from_string(cfg.mode);
	if (cfg.engine == "serial") {
		opts.engine = VerifyEngine::SerialReference;
	} else if (cfg.engine != "parallel") {
		throw UsageError("--engine is parallel or serial");
	}
	opts.cap = cfg.cap;
	opts.trials = cfg.trials;
	opts.seed = cfg.seed;
	opts.jobs = cfg.jobs;
	if (opts.mode != VerifyMode::Exhaustive) {
		r.params["trials"] = cfg.trials;
	}

	auto build = [&](std::uint64_t codebook_seed) {
		auto req = request_for(cfg, cfg.scheme, m, eps);
		req.binning.seed = codebook_seed;
		return m.quorum ? make_quorum_scheme(req, m.c_w, m.c_r) : make_scheme(req);
	};
	auto check = [&](const MvcScheme& s) {
		return m.quorum ? verify_definition_2(s, m.c_w, m.c_r, opts) : verify_requirement_A(s, opts);
	};
	const double budget = cfg.scheme == "binning" ? eps : 0.0;
	auto passes = [&](const VerificationReport& rep) {
		return rep.mode == VerifyMode::Exhaustive ? rep.passed() : rep.empirical_error <= budget;
	};

	r.columns = {"codebook_seed", "requirement", "mode",    "states",    "pairs",    "tuples",        "decodes",
	             "failures",      "error",       "wilson_low", "wilson_high", "max_case", "state_averaged", "passed"};
	std::vector<std::pair<std::uint64_t, VerificationReport>> reports;
	const unsigned seeds = cfg.scheme == "binning" ? std::max(1u, cfg.codebook_seeds) : 1u;
	for (unsigned k = 0; k < seeds; ++k) {
		const std::uint64_t s = cfg.seed + k;
		const auto scheme = build(s);
		reports.emplace_back(s, check(*scheme));
	}
	std::size_t best = 0;
	for (std::size_t k = 1; k < reports.size(); ++k) {
		const auto& a = reports[k].second;
		const auto& b = reports[best].second;
		if (std::make_pair(a.max_case_error.value_or(a.empirical_error), a.empirical_error) <
		    std::make_pair(b.max_case_error.value_or(b.empirical_error), b.empirical_error)) {
			best = k;
		}
	}
	auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
	for (const auto& [s, rep] : reports) {
		r.rows.push_back({{"codebook_seed", cfg.scheme == "binning" ? Json(s) : Json(nullptr)},
		                  {"requirement", rep.requirement},
		                  {"mode", to_string(rep.mode)},
		                  {"states", rep.states_checked},
		                  {"pairs", rep.subsets_checked},
		                  {"tuples", rep.tuples_checked},
		                  {"decodes", rep.decodes},
		                  {"failures", rep.failures},
		                  {"error", rep.empirical_error},
		                  {"wilson_low", rep.interval.low},
		                  {"wilson_high", rep.interval.high},
		                  {"max_case", opt(rep.max_case_error)},
		                  {"state_averaged", opt(rep.state_averaged_error)},
		                  {"passed", passes(rep)}});
	}
	const auto& chosen = reports[best].second;
	if (reports.size() > 1) {
		r.notes.push_back("best codebook seed: " + std::to_string(reports[best].first));
	}
	for (const auto& w : chosen.warnings) {
		r.notes.push_back("warning: " + w);
	}
	for (const auto& w : chosen.witnesses) {
		r.notes.push_back("witness: state=" + w.state.to_string() + " servers=" + servers_text(w.servers) +
		                  " target=" + std::to_string(w.target) + " status=" + to_string(w.status) + " decoded=" +
		                  (w.decoded_version ? std::to_string(*w.decoded_version) : "none") +
		                  (w.detail.empty() ? "" : " detail=\"" + w.detail + "\""));
	}
	r.details = Json::parse(chosen.to_json().dump());
	return passes(chosen) ? kPass : kFailure;
}

int cmd_bound(const RunConfig& cfg, Report& r) {
	if (cfg.c != 0 && (cfg.c_w != 0 || cfg.c_r != 0)) {
		throw UsageError("--c and --c-w/--c-r are mutually exclusive");
	}
	const unsigned c = cfg.c != 0 ? cfg.c : (cfg.c_w + cfg.c_r > cfg.n ? cfg.c_w + cfg.c_r - cfg.n : 0);
	if (c == 0) {
		throw UsageError("give --c, or --c-w and --c-r");
	}
	const double eps = epsilon_or(cfg, std::ldexp(1.0, -static_cast<int>(cfg.nu * cfg.n) - 1));
	r.params["n"] = cfg.n;
	r.params["c"] = c;
	r.params["nu"] = cfg.nu;
	r.params["epsilon"] = eps;
	std::vector<unsigned> Ks = cfg.K_list;
	if (Ks.empty()) {
		Ks = {cfg.K};
	}
	if (!cfg.delta.empty()) {
		r.params["delta"] = cfg.delta;
	} else {
		r.params["radius"] = cfg.radius < 0 ? 1 : cfg.radius;
	}
	const double target = static_cast<double>(c + cfg.nu - 1) / c;
	r.columns = {"K", "radius", "general", "two_versions", "binning_cost", "binning_bits", "gap", "gap_target",
	             "replication_gap"};
	for (unsigned K : Ks) {
		Report scratch;
		const auto model = resolve_model(cfg, K, scratch, false);
		BoundParams p{cfg.n, c, cfg.nu, K, model.radius, eps};
		const double general = lower_bound_general(p);
		Json two = nullptr;
		if (cfg.nu == 2) {
			two = lower_bound_two_versions(p);
		}
		Json binning_cost = nullptr;
		Json binning_bits = nullptr;
		Json gap = nullptr;
		Json repl_gap = nullptr;
		if (eps > 0) {
			const auto cost = binning_worst_case_cost(BinningParams(cfg.n, c, model, eps));
			binning_cost = cost.closed_form;
			binning_bits = cost.integer_bits;
			if (general > 0) {
				gap = gap_factor(p, cost.closed_form);
			}
		}
		if (general > 0) {
			repl_gap = gap_factor(p, K);
		}
		r.rows.push_back({{"K", K},
		                  {"radius", model.radius},
		                  {"general", general},
		                  {"two_versions", two},
		                  {"binning_cost", binning_cost},
		                  {"binning_bits", binning_bits},
		                  {"gap", gap},
		                  {"gap_target", target},
		                  {"replication_gap", repl_gap}});
	}
	r.notes.push_back("gap = binning_cost / general; large-K target (c+nu-1)/c");
	return kPass;
}

int cmd_sim(const RunConfig& cfg, Report& r) {
	r.params["scheme"] = cfg.scheme;
	if (cfg.search) {
		const auto m = resolve(cfg, r);
		if (!m.quorum) {
			throw UsageError("schedule search needs --c-w and --c-r");
		}
		r.params["depth"] = cfg.depth;
		r.params["seed"] = cfg.seed;
		SchemeRequest req = request_for(cfg, cfg.scheme, m, epsilon_or(cfg, 0.25));
		const auto scheme = make_quorum_scheme(req, m.c_w, m.c_r);
		SearchParams p{m.n, m.c_w, m.c_r, cfg.nu, cfg.K, m.model.radius, cfg.seed, 4};
		const auto result = adversarial_schedule_search(*scheme, p, cfg.depth);
		r.columns = {"scheme", "depth", "schedules", "witness"};
		r.rows.push_back({{"scheme", cfg.scheme},
		                  {"depth", cfg.depth},
		                  {"schedules", result.schedules_examined},
		                  {"witness", result.found() ? "found" : "none found"}});
		if (result.found()) {
			std::istringstream sched(result.witness->to_text());
			for (std::string line; std::getline(sched, line);) {
				r.notes.push_back(line);
			}
			std::istringstream trace(result.trace->to_text());
			for (std::string line; std::getline(trace, line);) {
				r.notes.push_back(line);
			}
		}
		return result.found() ? kFailure : kPass;
	}
	if (cfg.schedule.empty()) {
		throw UsageError("sim needs --schedule FILE or --search");
	}
	const auto schedule = Schedule::load(cfg.schedule);
	const auto& h = schedule.header;
	r.params["schedule"] = cfg.schedule;
	r.params["n"] = h.n;
	r.params["c_w"] = h.c_w;
	r.params["c_r"] = h.c_r;
	r.params["nu"] = h.nu;
	r.params["K"] = h.K;
	r.params["radius"] = h.radius;
	r.params["f"] = h.f;
	r.params["schedule_seed"] = h.seed;
	SchemeRequest req;
	req.name = cfg.scheme;
	req.config = SchemeConfig(h.n, h.c_w + h.c_r > h.n ? h.c_w + h.c_r - h.n : 1, h.model());
	req.epsilon = epsilon_or(cfg, 0.25);
	req.binning.kind = kind_of(cfg);
	req.binning.seed = cfg.seed;
	const auto scheme = make_quorum_scheme(req, h.c_w, h.c_r);
	const auto trace = run_simulation(*scheme, schedule);
	r.columns = {"t", "reader", "responders", "state", "status", "version", "latest_complete", "consistent", "flag"};
	for (const auto& rd : trace.reads) {
		std::string state;
		for (unsigned i = 0; i < rd.state.n(); ++i) {
			state += (i ? "|" : "") + rd.state.at(i).to_string();
		}
		r.rows.push_back({{"t", rd.time},
		                  {"reader", rd.reader},
		                  {"responders", servers_text(rd.responders)},
		                  {"state", state},
		                  {"status", to_string(rd.status)},
		                  {"version", rd.decoded_version ? Json(*rd.decoded_version) : Json(nullptr)},
		                  {"latest_complete", rd.latest_complete ? Json(*rd.latest_complete) : Json(nullptr)},
		                  {"consistent", rd.consistent},
		                  {"flag", rd.incomplete_later ? "incomplete-later" : "-"}});
	}
	for (const auto& w : trace.writes) {
		r.notes.push_back("write version=" + std::to_string(w.version) + " start=" + std::to_string(w.start) +
		                  " complete=" + (w.completed ? std::to_string(*w.completed) : "never") +
		                  " arrivals=" + std::to_string(w.arrivals));
	}
	r.notes.push_back("inconsistent reads: " + std::to_string(trace.inconsistent_reads()));
	r.details = Json{{"trace", trace.to_text()}};
	return trace.inconsistent_reads() == 0 ? kPass : kFailure;
}

int cmd_binning(const RunConfig& cfg, Report& r) {
	const auto m = resolve(cfg, r);
	const double eps = epsilon_or(cfg, 0.25);
	r.params["epsilon"] = eps;
	r.params["kind"] = cfg.kind;
	r.params["seed"] = cfg.seed;
	const BinningParams p(m.n, m.c, m.model, eps);
	const BinningCodebook book(kind_of(cfg), cfg.seed, p);
	r.columns = {"S", "rates", "bits", "total_bits", "real_total"};
	const unsigned nu = cfg.nu;
	for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << nu); ++mask) {
		const VersionSet s(mask);
		std::string rates;
		HighFloat real = 0;
		for (const auto& rate : version_rates(p, s)) {
			rates += (rates.empty() ? "" : "; ") + rate.to_string();
			real += rate.value(p);
		}
		std::string bits;
		unsigned total = 0;
		for (auto b : version_bits(p, s)) {
			bits += (bits.empty() ? "" : "+") + std::to_string(b);
			total += b;
		}
		r.rows.push_back({{"S", s.to_string()},
		                  {"rates", rates},
		                  {"bits", bits},
		                  {"total_bits", total},
		                  {"real_total", static_cast<double>(real / m.c)}});
	}
	const auto cost = binning_worst_case_cost(p);
	char buf[256];
	std::snprintf(buf, sizeof buf, "error exponent E = %.6f, index capacity = %u bits",
	              static_cast<double>(p.error_exponent()), index_capacity(p));
	r.notes.push_back(buf);
	std::snprintf(buf, sizeof buf, "closed-form cost %.6f, allocation sum %.6f, integer worst case %.0f at %s",
	              cost.closed_form, cost.allocation_sum, cost.integer_bits, cost.worst_set.to_string().c_str());
	r.notes.push_back(buf);
	const unsigned state_bits = nu * m.n;
	if (state_bits < 64 && (std::uint64_t{1} << state_bits) * static_cast<std::uint64_t>(binomial(m.n, m.c)) <= cfg.cap) {
		std::uint64_t checked = 0;
		std::uint64_t violated = 0;
		std::optional<HighFloat> min_slack;
		std::vector<ServerIndex> pick(m.c);
		for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << state_bits); ++idx) {
			const auto state = SystemState::from_index(idx, m.n, nu, m.c);
			std::iota(pick.begin(), pick.end(), 0u);
			for (;;) {
				if (const auto check = allocation_region_check(p, state, pick)) {
					++checked;
					violated += !check->satisfied;
					if (!min_slack || check->min_slack < *min_slack) {
						min_slack = check->min_slack;
					}
				}
				int k = static_cast<int>(m.c) - 1;
				while (k >= 0 && pick[k] == m.n - m.c + k) {
					--k;
				}
				if (k < 0) {
					break;
				}
				++pick[k];
				for (unsigned l = k + 1; l < m.c; ++l) {
					pick[l] = pick[l - 1] + 1;
				}
			}
		}
		std::snprintf(buf, sizeof buf, "rate region: %llu (state, subset) pairs, %llu violated, min slack %.6f bits",
		              static_cast<unsigned long long>(checked), static_cast<unsigned long long>(violated),
		              min_slack ? static_cast<double>(*min_slack) : 0.0);
		r.notes.push_back(buf);
		if (violated) {
			return kFailure;
		}
	} else {
		r.notes.push_back("rate region check skipped: state space above --cap");
	}
	r.details = Json::parse(book.descriptor().dump());
	if (!cfg.descriptor_out.empty()) {
		std::ofstream f(cfg.descriptor_out);
		if (!f) {
			throw std::runtime_error("cannot write " + cfg.descriptor_out);
		}
		f << book.descriptor().dump(2) << '\n';
	}
	return kPass;
}

int cmd_example1(const RunConfig& cfg, Report& r) {
	const auto [p, q] = parse_rational(cfg.delta.empty() ? "1/20" : cfg.delta);
	const double delta = static_cast<double>(p) / static_cast<double>(q);
	r.params["delta"] = std::to_string(p) + "/" + std::to_string(q);
	const auto rep = example1_rate_comparison(delta);
	r.columns = {"subset", "requirement", "have", "need", "excluded"};
	for (const auto& e : rep.exclusions) {
		r.rows.push_back({{"subset", e.subset},
		                  {"requirement", e.requirement},
		                  {"have", e.have},
		                  {"need", e.need},
		                  {"excluded", e.excluded}});
	}
	char buf[256];
	std::snprintf(buf, sizeof buf, "H(d) = %.6f, H(2d(1-d)) = %.6f, R1 = %.6f, R2 = %.6f, R3 = %.6f", rep.h,
	              rep.h_star, rep.r1, rep.r2, rep.r3);
	r.notes.push_back(buf);
	r.notes.push_back(rep.all_excluded() ? "every subset fails to decode uniquely" : "some subset decodes uniquely");
	return rep.all_excluded() ? kPass : kFailure;
}

void add_model_options(CLI::App* sub, RunConfig& cfg, bool quorum = true) {
	sub->add_option("-n,--n", cfg.n, "number of servers")->capture_default_str();
	sub->add_option("-c,--c", cfg.c, "decoding set size c");
	if (quorum) {
		sub->add_option("--c-w", cfg.c_w, "write quorum");
		sub->add_option("--c-r", cfg.c_r, "read quorum");
	}
	sub->add_option("--nu", cfg.nu, "versions")->capture_default_str();
	sub->add_option("-K,--K", cfg.K, "message bits")->capture_default_str();
	sub->add_option("-r,--radius", cfg.radius, "correlation radius (default 1)");
	sub->add_option("--delta", cfg.delta, "radius as a fraction of K, e.g. 1/16");
	sub->add_option("--epsilon", cfg.epsilon, "target error");
}

} // namespace

std::pair<std::uint64_t, std::uint64_t> parse_rational(const std::string& text) {
	auto to_u64 = [&](const std::string& s) {
		if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 18) {
			throw UsageError("bad rational '" + text + "'");
		}
		return std::stoull(s);
	};
	std::uint64_t num = 0;
	std::uint64_t den = 1;
	if (const auto slash = text.find('/'); slash != std::string::npos) {
		num = to_u64(text.substr(0, slash));
		den = to_u64(text.substr(slash + 1));
	} else if (const auto dot = text.find('.'); dot != std::string::npos) {
		const std::string frac = text.substr(dot + 1);
		num = to_u64(text.substr(0, dot).empty() ? "0" : text.substr(0, dot));
		for (std::size_t k = 0; k < frac.size(); ++k) {
			den *= 10;
			num *= 10;
		}
		num += frac.empty() ? 0 : to_u64(frac);
	} else {
		num = to_u64(text);
	}
	if (den == 0) {
		throw UsageError("zero denominator in '" + text + "'");
	}
	const auto g = std::gcd(num, den);
	return {num / (g ? g : 1), den / (g ? g : 1)};
}

Cli::Cli() : app(std::make_unique<CLI::App>("multi-version code toolkit", "mvc")) {
	auto& cfg = config;
	app->require_subcommand(1);
	app->set_config("--config", "", "read options from a TOML/INI file");
	app->add_option("--seed", cfg.seed, "root seed")->capture_default_str();
	app->add_option("--cap", cfg.cap, "enumeration cap")->capture_default_str();
	app->add_option("--format", cfg.format, "output format")
		->check(CLI::IsMember({"text", "csv", "structured"}))
		->capture_default_str();
	app->add_option("--jobs", cfg.jobs, "threads (0: all cores)");

	auto* cost = app->add_subcommand("cost", "storage cost table");
	add_model_options(cost, cfg);
	cost->add_option("--schemes", cfg.schemes, "schemes to include")->delimiter(',');
	cost->add_option("--random-tuples", cfg.random_tuples, "random tuples in non-exhaustive cost search");
	cost->add_option("--kind", cfg.kind, "binning kind: random, table, linear");

	auto* verify = app->add_subcommand("verify", "check the decoding requirement");
	add_model_options(verify, cfg);
	verify->add_option("--scheme", cfg.scheme, "scheme")->capture_default_str();
	verify->add_option("--mode", cfg.mode, "exhaustive, monte-carlo or sweep")->capture_default_str();
	verify->add_option("--engine", cfg.engine, "parallel or serial")->capture_default_str();
	verify->add_option("--trials", cfg.trials, "Monte-Carlo draws or sweep tuples")->capture_default_str();
	verify->add_option("--codebook-seeds", cfg.codebook_seeds, "binning codebook seeds to try");
	verify->add_option("--kind", cfg.kind, "binning kind: random, table, linear");

	auto* bound = app->add_subcommand("bound", "lower bound and gap factor");
	add_model_options(bound, cfg);
	bound->add_option("--K-list", cfg.K_list, "sweep over K")->delimiter(',');

	auto* sim = app->add_subcommand("sim", "run a schedule or search for a bad one");
	add_model_options(sim, cfg);
	sim->add_option("--scheme", cfg.scheme, "scheme")->capture_default_str();
	sim->add_option("--schedule", cfg.schedule, "schedule file");
	sim->add_flag("--search", cfg.search, "adversarial schedule search");
	sim->add_option("--depth", cfg.depth, "search depth in events (<= 12)");
	sim->add_option("--kind", cfg.kind, "binning kind: random, table, linear");

	auto* binning = app->add_subcommand("binning", "rate allocation and codebook");
	add_model_options(binning, cfg, false);
	binning->add_option("--kind", cfg.kind, "random, table or linear")->capture_default_str();
	binning->add_option("--descriptor-out", cfg.descriptor_out, "write the codebook descriptor");

	auto* ex1 = app->add_subcommand("example1", "three-version two-server rate comparison");
	ex1->add_option("--delta", cfg.delta, "correlation fraction (default 1/20)");
	for (auto* sub : app->get_subcommands({})) {
		sub->configurable();
	}
}

Cli::~Cli() = default;

std::string Cli::command() const {
	const auto subs = app->get_subcommands();
	return subs.empty() ? "" : subs.front()->get_name();
}

std::string Cli::config_text() const {
	return app->config_to_str(false, false);
}

std::unique_ptr<Cli> make_cli() {
	return std::make_unique<Cli>();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
	auto cli = make_cli();
	try {
		cli->app->parse(argc, argv);
	} catch (const CLI::ParseError& e) {
		std::ostringstream o;
		std::ostringstream x;
		const int code = cli->app->exit(e, o, x);
		out << o.str();
		err << x.str();
		return code == 0 ? kPass : kUsage;
	}
	const auto& cfg = cli->config;
	Report report;
	report.command = cli->command();
	try {
		int code = kPass;
		if (cfg.jobs < 0) {
			throw UsageError("--jobs must be >= 0");
		}
		if (report.command == "cost") {
			code = cmd_cost(cfg, report);
		} else if (report.command == "verify") {
			code = cmd_verify(cfg, report);
		} else if (report.command == "bound") {
			code = cmd_bound(cfg, report);
		} else if (report.command == "sim") {
			code = cmd_sim(cfg, report);
		} else if (report.command == "binning") {
			code = cmd_binning(cfg, report);
		} else if (report.command == "example1") {
			code = cmd_example1(cfg, report);
		}
		render(report, cfg.format, out);
		return code;
	} catch (const CapExceeded& e) {
		err << "cap exceeded: " << e.what() << '\n';
		return kCapExceeded;
	} catch (const std::exception& e) {
		err << "error: " << e.what() << '\n';
		return kUsage;
	}
}

} // namespace mvc::cli
