#pragma once

#include <string>

#include "json.hpp"
#include "hdx/complex.hpp"
#include "hdx/g2lab.hpp"
#include "hdx/matgroups.hpp"
#include "hdx/rootsys.hpp"
#include "hdx/spectra.hpp"

namespace hdx {

using Json = nlohmann::json;

Json root_system_json(const RootSystem& phi);
Json field_json(const Field& f);
Json spectral_json(const SpectralReport& r);
Json connectivity_json(const ConnectivityReport& r);
Json link_json(const LinkGraph& l);
Json certificate_json(const Certificate& c);
Json g2_json(const G2Exploration& e);
Json center_json(const CenterDesc& z);

/// Counts per type, degree statistics, transitivity and the intersection
/// certificate; connectivity when `check_connectivity`.
Json complex_json(const CosetComplex& k, bool check_connectivity);

/// Two-space indented dump with a trailing newline; object keys are sorted.
std::string dump(const Json& j);

}  // namespace hdx
