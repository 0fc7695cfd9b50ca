// Acceptance checks, one per criterion. Each prints a PASS/FAIL line plus
// the numbers behind it; tolerances are the constants below.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mvc/binning.hpp"
#include "mvc/bounds.hpp"
#include "mvc/galois.hpp"
#include "mvc/registry.hpp"
#include "mvc/rng.hpp"
#include "mvc/sim.hpp"
#include "mvc/verifier.hpp"
#include "oracle.hpp"

using namespace mvc;

namespace {

constexpr double kRuntimeLimitSeconds = 300.0;     // per scheme, criterion 1
const double kRecomputeTolerance = std::ldexp(1.0, -40);  // criterion 2
constexpr double kParitySigmas = 3.0;              // criterion 5
constexpr std::uint64_t kParityDraws = 10000;
constexpr std::uint64_t kParitySeed = 20240601;
constexpr double kGapLimit = 2.0;                  // criterion 6
constexpr unsigned kSearchDepth = 12;              // criterion 9

const std::vector<std::string> kZeroErrorSchemes{"mds", "replication", "delta", "rs-update"};

struct Outcome {
	bool pass = true;
	std::ostringstream log;

	void require(bool ok, const std::string& what) {
		log << "    " << (ok ? "ok   " : "FAIL ") << what << "\n";
		pass = pass && ok;
	}
	void note(const std::string& what) { log << "    " << what << "\n"; }
};

std::string fmt(const char* f, double x) {
	char buf[64];
	std::snprintf(buf, sizeof buf, f, x);
	return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
	return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SchemePtr build(const std::string& name, unsigned n, unsigned c, const CorrelationModel& m, double eps = 0.25) {
	return make_scheme({name, SchemeConfig(n, c, m), eps});
}

Message random_message(unsigned K, Rng& rng) {
	Message w(K);
	for (unsigned k = 0; k < K; ++k) {
		w.set(k, rng() & 1u);
	}
	return w;
}

// Schemes that pass requirement A exhaustively at (n=4, c=2, nu=2, K=8, r=1).
std::vector<std::string> certified_schemes(Outcome& out) {
	std::vector<std::string> ok;
	const CorrelationModel model(8, 1, 2);
	for (const auto& name : scheme_names()) {
		const auto rep = verify_requirement_A(*build(name, 4, 2, model));
		const bool certified = rep.mode == VerifyMode::Exhaustive && rep.passed();
		out.note(name + ": requirement A exhaustive " + (certified ? "passes" : "fails") + " (" +
		         std::to_string(rep.failures) + " failures)");
		if (certified) {
			ok.push_back(name);
		}
	}
	return ok;
}

void criterion1(Outcome& out) {
	const CorrelationModel model(8, 1, 2);
	for (const auto& name : kZeroErrorSchemes) {
		const auto t0 = std::chrono::steady_clock::now();
		const auto rep = verify_requirement_A(*build(name, 4, 2, model));
		const double secs = seconds_since(t0);
		out.require(rep.mode == VerifyMode::Exhaustive && rep.states_checked == 256 && rep.tuples_checked == 2304 &&
		                rep.failures == 0 && rep.passed(),
		            name + ": " + std::to_string(rep.states_checked) + " states x " + std::to_string(rep.tuples_checked) +
		                " tuples, " + std::to_string(rep.decodes) + " decodes, " + std::to_string(rep.failures) +
		                " failures");
		out.require(secs < kRuntimeLimitSeconds, name + ": " + fmt("%.2f s", secs));
	}
}

// Closed forms evaluated in MPFR from the parameters alone.
oracle::Mpfr recompute(const std::string& name, unsigned n, unsigned c, unsigned nu, unsigned K, unsigned r, double eps,
                       unsigned field_m) {
	using oracle::Mpfr;
	const Mpfr k{double(K)};
	const Mpfr cc{double(c)};
	const Mpfr log_vol = oracle::log2(oracle::ball_volume(r, K));
	if (name == "replication") {
		return k;
	}
	if (name == "mds") {
		return Mpfr(double(nu)) * k / cc;
	}
	if (name == "delta") {
		return k / cc + Mpfr(double(nu - 1)) * log_vol;
	}
	if (name == "rs-update") {
		Mpfr per = Mpfr(double(r)) * oracle::log2(k * Mpfr(std::ldexp(1.0, int(field_m))) / (cc * Mpfr(double(field_m))));
		if (mpfr_cmp(per.get(), (k / cc).get()) > 0) {
			per = k / cc;
		}
		return k / cc + Mpfr(double(nu - 1)) * per;
	}
	if (name == "binning") {
		const Mpfr E = Mpfr(double(nu * n)) - oracle::log2(Mpfr(eps));
		return (k + Mpfr(double(nu - 1)) * log_vol + Mpfr(nu * (nu - 1) / 2.0) + Mpfr(double(nu)) * E) / cc;
	}
	throw std::invalid_argument("no closed form for " + name);
}

void criterion2(Outcome& out) {
	const unsigned n = 8, c = 4, nu = 2, K = 64, r = 2;
	const double eps = std::ldexp(1.0, -20);
	const CorrelationModel model(K, r, nu);
	std::map<std::string, double> formula;
	for (const std::string name : {"replication", "mds", "delta", "rs-update", "binning"}) {
		const auto s = build(name, n, c, model, eps);
		const auto cost = worst_case_cost(*s);
		const auto a = cost.analytic;
		formula[name] = a.formula;
		out.require(double(cost.measured_bits) <= a.integer_bound,
		            name + ": measured " + std::to_string(cost.measured_bits) + " bits <= bound " +
		                fmt("%.0f", a.integer_bound) + " (formula " + fmt("%.6f", a.formula) + ")");
		unsigned m = 0;
		if (const auto* rs = dynamic_cast<const RsUpdateScheme*>(s.get())) {
			m = rs->codec().m();
		}
		const double rel = std::fabs((oracle::Mpfr(a.formula) - recompute(name, n, c, nu, K, r, eps, m)).to_double()) /
		                   a.formula;
		out.require(rel <= kRecomputeTolerance, name + ": formula vs big-number recomputation, relative " + fmt("%.3g", rel));
	}
	const double lb = lower_bound_general({n, c, nu, K, r, eps});
	out.note("lower bound " + fmt("%.6f", lb));
	out.require(formula["binning"] < formula["delta"],
	            "binning " + fmt("%.6f", formula["binning"]) + " < delta " + fmt("%.6f", formula["delta"]));
	out.require(formula["delta"] < std::min(formula["mds"], formula["replication"]),
	            "delta " + fmt("%.6f", formula["delta"]) + " < min(mds, replication) " +
	                fmt("%.6f", std::min(formula["mds"], formula["replication"])));
}

void criterion3(Outcome& out) {
	unsigned points = 0;
	unsigned worst = 0;
	std::string bad;
	Rng rng(derive_seed(3, {}));
	for (unsigned n = 1; n <= 6; ++n) {
		for (unsigned c = 1; c <= n; ++c) {
			for (unsigned K = 1; K <= 24; ++K) {
				const auto scheme = build("rs-update", n, c, CorrelationModel(K, 1, 2));
				const auto& codec = dynamic_cast<const RsUpdateScheme&>(*scheme).codec();
				// The code is linear, so the generator image of each unit vector
				// decides every message at once.
				const auto gen = binary_expand_generator(codec);
				unsigned t = gen.max_update_efficiency();
				// Direct sweep on a random message as a cross-check.
				const auto w = random_message(K, rng);
				for (unsigned k = 0; k < K; ++k) {
					auto v = w;
					v.flip(k);
					for (unsigned i = 0; i < n; ++i) {
						const auto a = codec.encode_server(i, w);
						const auto b = codec.encode_server(i, v);
						unsigned changed = 0;
						for (std::size_t j = 0; j < a.size(); ++j) {
							changed += a[j] != b[j];
						}
						t = std::max(t, changed);
					}
				}
				worst = std::max(worst, t);
				if (t > 1 && bad.empty()) {
					bad = "n=" + std::to_string(n) + " c=" + std::to_string(c) + " K=" + std::to_string(K);
				}
				++points;
			}
		}
	}
	out.require(worst <= 1, std::to_string(points) + " points (n <= 6, c <= n, K <= 24), max symbols changed per server " +
	                            std::to_string(worst) + (bad.empty() ? "" : ", first bad point " + bad));
}

void criterion4(Outcome& out) {
	const double eps = 0.25;
	const BinningParams p(4, 2, CorrelationModel(8, 1, 2), eps);
	std::uint64_t checks = 0;
	bool all = true;
	HighFloat min_slack = 1e9;
	for (std::uint64_t idx = 0; idx < 256; ++idx) {
		const auto state = SystemState::from_index(idx, 4, 2, 2);
		for (ServerIndex a = 0; a < 4; ++a) {
			for (ServerIndex b = a + 1; b < 4; ++b) {
				const std::vector<ServerIndex> T{a, b};
				if (const auto check = allocation_region_check(p, state, T)) {
					++checks;
					all = all && check->satisfied && check->min_slack >= 0;
					min_slack = std::min(min_slack, check->min_slack);
				}
			}
		}
	}
	out.require(all, std::to_string(checks) + " (state, subset) region checks, min slack " +
	                     fmt("%.6f", static_cast<double>(min_slack)));

	VerifyOptions o;
	o.mode = VerifyMode::Sweep;
	o.trials = 1000;
	std::vector<std::uint64_t> seeds;
	for (std::uint64_t s = 1; s <= 10; ++s) {
		seeds.push_back(s);
	}
	const auto est = estimate_epsilon(
		[&](std::uint64_t seed) {
			BinningOptions b;
			b.kind = BinningKind::ExactTable;
			b.seed = seed;
			return make_scheme({"binning", SchemeConfig(4, 2, p.model), eps, b});
		},
		seeds, o);
	for (const auto& s : est.per_seed) {
		out.note("seed " + std::to_string(s.seed) + ": error " + fmt("%.3g", s.report.empirical_error) +
		         ", worst state " + fmt("%.3g", *s.report.max_case_error));
	}
	const auto& best = est.best_seed();
	out.require(*best.report.max_case_error <= eps,
	            "exact-table bins, best seed " + std::to_string(best.seed) + ": worst (state, subset) error " +
	                fmt("%.4g", *best.report.max_case_error) + " <= " + fmt("%.2f", eps) + " over " +
	                std::to_string(o.trials) + " tuples per state; overall " + fmt("%.3g", best.report.empirical_error) +
	                ", 95% Wilson upper " + fmt("%.3g", best.report.interval.high));
}

void criterion5(Outcome& out) {
	unsigned points = 0;
	unsigned misses = 0;
	double worst = 0;
	const double ps[] = {0.1, 0.25, 0.5};
	for (unsigned pi = 0; pi < 3; ++pi) {
		for (unsigned w = 1; w <= 8; ++w) {
			for (unsigned M = 1; M <= 8; ++M) {
				const double exact = even_parity_probability(ps[pi], w, M);
				const auto e = estimate_even_parity(ps[pi], w, M, kParityDraws, derive_seed(kParitySeed, {pi, w, M}));
				const double z = std::fabs(e.estimate - exact) / e.standard_error;
				worst = std::max(worst, z);
				if (z > kParitySigmas) {
					++misses;
					out.note("outside: p=" + fmt("%.2f", ps[pi]) + " w=" + std::to_string(w) + " M=" + std::to_string(M) +
					         " exact " + fmt("%.6f", exact) + " estimate " + fmt("%.6f", e.estimate));
				}
				++points;
			}
		}
	}
	out.require(misses == 0, std::to_string(points) + " grid points, " + std::to_string(kParityDraws) +
	                             " draws each, largest deviation " + fmt("%.2f", worst) + " standard errors");
}

void criterion6(Outcome& out) {
	struct Point {
		unsigned n, c, nu, K, r;
	};
	const std::vector<Point> points{{4, 2, 2, 8, 1},  {4, 3, 2, 12, 1}, {6, 3, 2, 12, 2}, {3, 1, 2, 8, 2},
	                                {4, 2, 3, 8, 1},  {6, 2, 3, 24, 1}, {5, 4, 2, 32, 2}, {8, 4, 2, 64, 2},
	                                {8, 8, 2, 32, 2}, {8, 8, 2, 64, 4}, {8, 8, 2, 128, 8}};
	unsigned comparisons = 0;
	bool sound = true;
	for (const auto& pt : points) {
		const double eps = std::ldexp(1.0, -static_cast<int>(pt.nu * pt.n) - 1);
		const double bound = lower_bound_general({pt.n, pt.c, pt.nu, pt.K, pt.r, eps});
		const CorrelationModel model(pt.K, pt.r, pt.nu);
		for (const std::string name : {"replication", "mds", "delta", "rs-update", "binning"}) {
			const auto cost = worst_case_cost(*build(name, pt.n, pt.c, model, eps));
			++comparisons;
			if (bound > double(cost.measured_bits)) {
				sound = false;
				out.note("violated: " + name + " n=" + std::to_string(pt.n) + " c=" + std::to_string(pt.c) +
				         " K=" + std::to_string(pt.K) + " bound " + fmt("%.4f", bound) + " > " +
				         std::to_string(cost.measured_bits));
			}
		}
	}
	out.require(sound, "lower bound <= measured worst-case cost in " + std::to_string(comparisons) + " comparisons");

	const unsigned n = 8, c = 8, nu = 2;
	const double eps = std::ldexp(1.0, -static_cast<int>(nu * n) - 1);
	const double target = double(c + nu - 1) / c;
	double last = 1e300;
	bool decreasing = true;
	for (unsigned K : {32u, 64u, 128u}) {
		const BoundParams bp{n, c, nu, K, K / 16, eps};
		const double binning = binning_worst_case_cost(BinningParams(n, c, CorrelationModel(K, K / 16, nu), eps)).closed_form;
		const double gap = gap_factor(bp, binning);
		out.require(gap <= kGapLimit, "K=" + std::to_string(K) + ": binning " + fmt("%.6f", binning) + " / bound " +
		                                  fmt("%.6f", lower_bound_general(bp)) + " = gap " + fmt("%.4f", gap) +
		                                  " <= " + fmt("%.1f", kGapLimit));
		decreasing = decreasing && gap < last && gap > target;
		last = gap;
	}
	out.require(decreasing, "gap decreasing toward (c+nu-1)/c = " + fmt("%.4f", target));
}

void criterion7(Outcome& out) {
	const auto r = example1_rate_comparison(0.05);
	out.require(r.h < r.h_star, "H(d) " + fmt("%.6f", r.h) + " < H(2d(1-d)) " + fmt("%.6f", r.h_star));
	out.require(0.5 + 2 * r.h < 1 + r.h, "1/2 + 2H(d) " + fmt("%.6f", 0.5 + 2 * r.h) + " < 1 + H(d) " + fmt("%.6f", 1 + r.h));
	out.require(r.r1 + r.r3 < 1 + r.h_star,
	            "R1+R3 " + fmt("%.6f", r.r1 + r.r3) + " < 1 + H(2d(1-d)) " + fmt("%.6f", 1 + r.h_star));
	for (const auto& e : r.exclusions) {
		out.require(e.excluded, e.subset + ": " + e.requirement + " fails (" + fmt("%.6f", e.have) + " < " +
		                            fmt("%.6f", e.need) + ")");
	}
}

void criterion8(Outcome& out) {
	const unsigned n = 4, c = 2;
	const CorrelationModel model(8, 1, 2);
	for (const auto& name : certified_schemes(out)) {
		for (unsigned c_w = 1; c_w <= n; ++c_w) {
			for (unsigned c_r = 1; c_r <= n; ++c_r) {
				if (c_w + c_r != n + c) {
					continue;
				}
				const auto bridged = make_quorum_scheme({name, SchemeConfig(n, c, model)}, c_w, c_r);
				const auto rep = verify_definition_2(*bridged, c_w, c_r);
				out.require(rep.mode == VerifyMode::Exhaustive && rep.passed(),
				            name + " (c_w=" + std::to_string(c_w) + ", c_r=" + std::to_string(c_r) + "): " +
				                std::to_string(rep.decodes) + " decodes, " + std::to_string(rep.failures) + " failures");
			}
		}
	}
}

void criterion9(Outcome& out) {
	const auto schedule = Schedule::load(std::string(MVC_DATA_DIR) + "/fig1.schedule");
	const auto& h = schedule.header;
	const CorrelationModel model = h.model();
	auto quorum = [&](const std::string& name) {
		return make_quorum_scheme({name, SchemeConfig(h.n, h.c_w + h.c_r - h.n, model)}, h.c_w, h.c_r);
	};
	const auto lo = run_simulation(*quorum("latest-only"), schedule);
	out.require(lo.inconsistent_reads() >= 1,
	            "fig1 under latest-only: " + std::to_string(lo.inconsistent_reads()) + " inconsistent of " +
	                std::to_string(lo.reads.size()) + " reads");
	const auto mds = run_simulation(*quorum("mds"), schedule);
	out.require(mds.inconsistent_reads() == 0 && !mds.reads.empty(),
	            "fig1 under mds: " + std::to_string(mds.inconsistent_reads()) + " inconsistent of " +
	                std::to_string(mds.reads.size()) + " reads");

	const unsigned n = 4, c = 2;
	for (const auto& name : certified_schemes(out)) {
		for (unsigned c_w = 1; c_w <= n; ++c_w) {
			const unsigned c_r = n + c - c_w;
			if (c_r < 1 || c_r > n) {
				continue;
			}
			SearchParams p;
			p.n = n;
			p.c_w = c_w;
			p.c_r = c_r;
			const auto scheme = make_quorum_scheme({name, SchemeConfig(n, c, CorrelationModel(p.K, p.radius, p.nu))}, c_w, c_r);
			const auto result = adversarial_schedule_search(*scheme, p, kSearchDepth);
			out.require(!result.found(), name + " (c_w=" + std::to_string(c_w) + ", c_r=" + std::to_string(c_r) +
			                                 "): no witness in " + std::to_string(result.schedules_examined) +
			                                 " schedules up to depth " + std::to_string(kSearchDepth));
		}
	}
	SearchParams p;
	const auto control = adversarial_schedule_search(
		*make_quorum_scheme({"latest-only", SchemeConfig(4, 2, CorrelationModel(8, 1, 2))}, 3, 3), p, kSearchDepth);
	out.note(std::string("control: latest-only witness ") + (control.found() ? "found" : "not found") + " after " +
	         std::to_string(control.schedules_examined) + " schedules");
}

const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> kCriteria{
	{"exhaustive zero-error certification", criterion1},
	{"cost table and ordering", criterion2},
	{"single-bit update efficiency", criterion3},
	{"binning region and error", criterion4},
	{"even-parity probability", criterion5},
	{"lower-bound soundness and gap", criterion6},
	{"three-version rate exclusions", criterion7},
	{"quorum bridge", criterion8},
	{"simulator", criterion9},
};

} // namespace

int main(int argc, char** argv) {
	CLI::App app{"acceptance checks"};
	unsigned only = 0;
	app.add_option("--criterion", only, "run a single criterion (1-9)")->check(CLI::Range(1u, 9u));
	CLI11_PARSE(app, argc, argv);

	bool all = true;
	for (unsigned i = 1; i <= kCriteria.size(); ++i) {
		if (only != 0 && only != i) {
			continue;
		}
		Outcome out;
		const auto t0 = std::chrono::steady_clock::now();
		try {
			kCriteria[i - 1].second(out);
		} catch (const std::exception& e) {
			out.require(false, std::string("exception: ") + e.what());
		}
		std::cout << "criterion " << i << ": " << (out.pass ? "PASS" : "FAIL") << "  " << kCriteria[i - 1].first
		          << fmt("  (%.1f s)", seconds_since(t0)) << "\n"
		          << out.log.str() << std::flush;
		all = all && out.pass;
	}
	return all ? 0 : 1;
}
