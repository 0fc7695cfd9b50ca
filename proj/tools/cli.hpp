#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace CLI {
class App;
}

namespace mvc::cli {

enum ExitCode { kPass = 0, kFailure = 1, kUsage = 2, kCapExceeded = 3 };

// Every flag of every subcommand; zero / empty / negative means "not given".
struct RunConfig {
	std::uint64_t seed = 1;
	std::uint64_t cap = std::uint64_t{1} << 24;
	std::string format = "text";
	int jobs = 0;

	unsigned n = 4;
	unsigned c = 0;
	unsigned c_w = 0;
	unsigned c_r = 0;
	unsigned nu = 2;
	unsigned K = 8;
	int radius = -1;
	std::string delta;     // rational "p/q" or decimal; radius = floor(delta*K)
	double epsilon = -1;   // command default when negative

	std::vector<std::string> schemes;  // cost
	std::string scheme = "mds";        // verify, sim
	std::string mode = "exhaustive";
	std::string engine = "parallel";
	std::uint64_t trials = 1000;
	unsigned codebook_seeds = 1;       // verify binning: seeds 1..N, best reported
	std::string kind = "random";
	std::string descriptor_out;        // binning
	std::vector<unsigned> K_list;      // bound sweep
	std::string schedule;              // sim
	bool search = false;
	unsigned depth = 12;
	unsigned random_tuples = 64;       // cost search

	friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct Cli {
	std::unique_ptr<CLI::App> app;
	RunConfig config;
	Cli();
	~Cli();
	// Name of the chosen subcommand after parse, or "".
	std::string command() const;
	// Every option that was set, in the config-file format --config reads.
	std::string config_text() const;
};

std::unique_ptr<Cli> make_cli();

// Parses argv and runs the command; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "3/64", "0.05", "1" -> (numerator, denominator) in lowest terms.
std::pair<std::uint64_t, std::uint64_t> parse_rational(const std::string& text);

} // namespace mvc::cli
