#include "mvc/registry.hpp"

#include <stdexcept>

namespace mvc {

const std::vector<std::string>& scheme_names() {
	static const std::vector<std::string> names{"replication", "mds", "delta", "rs-update", "latest-only", "binning"};
	return names;
}

SchemePtr make_scheme(const SchemeRequest& r) {
	if (r.name == "replication") {
		return std::make_shared<ReplicationScheme>(r.config);
	}
	if (r.name == "mds") {
		return std::make_shared<MdsScheme>(r.config);
	}
	if (r.name == "delta") {
		return std::make_shared<DeltaScheme>(r.config);
	}
	if (r.name == "rs-update") {
		return std::make_shared<RsUpdateScheme>(r.config);
	}
	if (r.name == "latest-only") {
		return std::make_shared<LatestOnlyScheme>(r.config);
	}
	if (r.name == "binning") {
		return std::make_shared<BinningScheme>(BinningParams(r.config.n, r.config.c, r.config.model, r.epsilon),
		                                       r.binning);
	}
	throw std::invalid_argument("unknown scheme '" + r.name + "'");
}

SchemePtr make_quorum_scheme(SchemeRequest request, unsigned c_w, unsigned c_r) {
	const unsigned n = request.config.n;
	if (c_w > n || c_r > n || c_w + c_r <= n) {
		throw std::domain_error("quorums need c_w, c_r <= n and c_w + c_r > n");
	}
	request.config = SchemeConfig(n, c_w + c_r - n, request.config.model);
	return quorum_bridge(make_scheme(request), c_w, c_r);
}

} // namespace mvc
