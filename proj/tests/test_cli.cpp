#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli.hpp"

using namespace mvc::cli;

namespace {

struct Outcome {
	int code;
	std::string out;
	std::string err;
};

Outcome run_args(std::vector<std::string> args) {
	args.insert(args.begin(), "mvc");
	std::vector<const char*> argv;
	for (const auto& a : args) {
		argv.push_back(a.c_str());
	}
	std::ostringstream out;
	std::ostringstream err;
	const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
	return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
	std::ifstream f(path);
	REQUIRE(f.good());
	std::stringstream ss;
	ss << f.rdbuf();
	return ss.str();
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("rationals") {
	CHECK(parse_rational("1/20") == std::pair<std::uint64_t, std::uint64_t>{1, 20});
	CHECK(parse_rational("2/8") == std::pair<std::uint64_t, std::uint64_t>{1, 4});
	CHECK(parse_rational("0.05") == std::pair<std::uint64_t, std::uint64_t>{1, 20});
	CHECK(parse_rational("3") == std::pair<std::uint64_t, std::uint64_t>{3, 1});
	CHECK_THROWS(parse_rational("1/0"));
	CHECK_THROWS(parse_rational("x"));
	CHECK_THROWS(parse_rational("-1/2"));
}

TEST_CASE("config round trip") {
	auto cli = make_cli();
	const char* argv[] = {"mvc", "--seed", "9", "--format", "csv", "verify", "-n", "5", "--c-w", "4",
	                      "--c-r", "3", "--delta", "1/8", "--scheme", "delta", "--mode", "sweep", "--trials", "77"};
	cli->app->parse(static_cast<int>(std::size(argv)), argv);
	const RunConfig first = cli->config;
	const std::string text = cli->config_text();
	const std::string path = "cli_roundtrip.toml";
	{
		std::ofstream f(path);
		f << text;
	}
	auto again = make_cli();
	const char* argv2[] = {"mvc", "--config", path.c_str()};
	again->app->parse(static_cast<int>(std::size(argv2)), argv2);
	CHECK(again->config == first);
	CHECK(again->command() == "verify");
	CHECK(again->config_text() == text);
}

TEST_CASE("c and quorum sizes are exclusive") {
	const auto r = run_args({"cost", "-n", "4", "-c", "2", "--c-w", "3", "--c-r", "3"});
	CHECK(r.code == kUsage);
	CHECK(r.err.find("mutually exclusive") != std::string::npos);
	CHECK(run_args({"cost", "-n", "4", "--c-w", "3"}).code == kUsage);
	CHECK(run_args({"cost", "-n", "4"}).code == kUsage);
	CHECK(run_args({"cost", "-n", "4", "-c", "2", "-r", "1", "--delta", "1/8"}).code == kUsage);
	CHECK(run_args({"frobnicate"}).code == kUsage);
	CHECK(run_args({"--format", "xml", "example1"}).code == kUsage);
}

TEST_CASE("delta conversion is echoed") {
	const auto r = run_args({"bound", "-n", "8", "-c", "8", "--delta", "1/16", "-K", "64"});
	CHECK(r.code == kPass);
	CHECK(r.out.find("delta=1/16") != std::string::npos);
	CHECK(r.out.find("64  4") != std::string::npos);
}

TEST_CASE("cost table") {
	const auto r = run_args({"--format", "csv", "cost", "-n", "4", "-c", "2", "-K", "8", "-r", "1", "--epsilon", "0.25"});
	CHECK(r.code == kPass);
	CHECK(r.out.find("replication,8.000000,8.000000,8,8,") != std::string::npos);
	CHECK(r.out.find("mds,8.000000,8.000000,8,8,") != std::string::npos);
	CHECK(r.out.find("lower-bound,") != std::string::npos);
	CHECK(r.out.find("binning,") != std::string::npos);
	// Byte-identical reruns.
	CHECK(run_args({"--format", "csv", "cost", "-n", "4", "-c", "2", "-K", "8", "-r", "1"}).out ==
	      run_args({"--format", "csv", "cost", "-n", "4", "-c", "2", "-K", "8", "-r", "1"}).out);
	const auto s1 = run_args({"--format", "structured", "cost", "-n", "4", "-c", "2", "--nu", "1", "-K", "8"});
	CHECK(s1.out == run_args({"--format", "structured", "cost", "-n", "4", "-c", "2", "--nu", "1", "-K", "8"}).out);
	const auto j = nlohmann::json::parse(s1.out);
	CHECK(j["rows"][1]["formula"].get<double>() == 4.0);  // mds at nu=1 is K/c
}

TEST_CASE("verify exit codes") {
	CHECK(run_args({"verify", "-n", "4", "-c", "2", "-K", "8", "-r", "1", "--scheme", "mds"}).code == kPass);
	const auto bad = run_args({"verify", "-n", "4", "--c-w", "3", "--c-r", "3", "-K", "8", "-r", "1", "--scheme",
	                           "latest-only"});
	CHECK(bad.code == kFailure);
	CHECK(bad.out.find("witness: state=") != std::string::npos);
	const auto capped = run_args({"--cap", "100", "verify", "-n", "4", "-c", "2", "-K", "8", "--scheme", "mds",
	                              "--trials", "200"});
	CHECK(capped.code == kPass);
	CHECK(capped.out.find("switched to monte-carlo") != std::string::npos);
}

TEST_CASE("cap exceeded") {
	// Binning decoding of K = 40 needs enumeration far above the cap.
	const auto r = run_args({"--cap", "1000", "cost", "-n", "4", "-c", "2", "-K", "40", "-r", "20", "--schemes", "delta"});
	CHECK((r.code == kPass || r.code == kCapExceeded));
}

TEST_CASE("example and sim commands") {
	const auto ex = run_args({"example1", "--delta", "0.05"});
	CHECK(ex.code == kPass);
	CHECK(ex.out.find("every subset fails to decode uniquely") != std::string::npos);
	const auto search = run_args({"sim", "--search", "--scheme", "latest-only", "-n", "4", "--c-w", "3", "--c-r", "3",
	                              "--depth", "7"});
	CHECK(search.code == kFailure);
	CHECK(search.out.find("found") != std::string::npos);
	CHECK(run_args({"sim", "--scheme", "mds"}).code == kUsage);
	CHECK(run_args({"sim", "--schedule", "does-not-exist.schedule"}).code == kUsage);
}

TEST_CASE("binning command writes a loadable descriptor") {
	const auto r = run_args({"binning", "-n", "4", "-c", "2", "-K", "8", "-r", "1", "--epsilon", "0.25", "--kind",
	                         "linear", "--descriptor-out", "codebook.json"});
	CHECK(r.code == kPass);
	CHECK(r.out.find("0 violated") != std::string::npos);
	std::ifstream f("codebook.json");
	const auto j = nlohmann::json::parse(f);
	CHECK(j["kind"] == "linear");
}

TEST_CASE("golden outputs replay byte for byte") {
	const std::string data = MVC_DATA_DIR;
	const std::vector<std::pair<std::string, std::vector<std::string>>> cases{
		{"cost_n4_c2_K8.csv", {"--format", "csv", "cost", "-n", "4", "-c", "2", "-K", "8", "-r", "1", "--epsilon", "0.25"}},
		{"example1.txt", {"example1", "--delta", "0.05"}},
		{"bound_n8_c8_K32.txt", {"bound", "-n", "8", "-c", "8", "--delta", "1/16", "-K", "32"}},
		{"cost_nu1.json", {"--format", "structured", "cost", "-n", "4", "-c", "2", "--nu", "1", "-K", "8"}},
		{"sim_fig1_mds.txt", {"sim", "--schedule", "fig1.schedule", "--scheme", "mds"}},
		{"sim_fig1_latest_only.txt", {"sim", "--schedule", "fig1.schedule", "--scheme", "latest-only"}},
	};
	const auto here = std::filesystem::current_path();
	std::filesystem::current_path(data);
	for (const auto& [file, args] : cases) {
		CHECK_MESSAGE(run_args(args).out == slurp("golden/" + file), file);
	}
	std::filesystem::current_path(here);
}

}
