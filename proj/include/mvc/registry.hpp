#pragma once

#include <string>
#include <vector>

#include "mvc/binning.hpp"
#include "mvc/schemes.hpp"

namespace mvc {

struct SchemeRequest {
	SchemeRequest() = default;
	SchemeRequest(std::string name_, SchemeConfig config_, double epsilon_ = 0.25, BinningOptions binning_ = {})
		: name(std::move(name_)), config(std::move(config_)), epsilon(epsilon_), binning(binning_) {}

	std::string name;
	SchemeConfig config;
	double epsilon = 0.25;  // binning only
	BinningOptions binning;
};

// replication, mds, delta, rs-update, latest-only, binning
const std::vector<std::string>& scheme_names();
SchemePtr make_scheme(const SchemeRequest& request);

// The scheme for c = c_w + c_r - n, wrapped to read from c_r servers.
SchemePtr make_quorum_scheme(SchemeRequest request, unsigned c_w, unsigned c_r);

} // namespace mvc
