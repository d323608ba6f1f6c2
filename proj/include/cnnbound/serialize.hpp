#pragma once

#include <json.hpp>

#include "cnnbound/cnn.hpp"
#include "cnnbound/kernel_machine.hpp"
#include "cnnbound/margin_bound.hpp"
#include "cnnbound/neighborly.hpp"

namespace cnnbound {

using Json = nlohmann::ordered_json;

/// {pass, index, c, y}; y is null for events fired against an empty rule.
Json to_json(const UpdateEvent& e, const Dataset& data);
/// {passes, prototypes: [{index, x, c}], events: [...]}
Json to_json(const UpdateTrace& trace);

/// {sigma, records: [{index, x, c, y}]} with classes written by name.
Json to_json(const DualWeightVector& w, const Dataset& data);
DualWeightVector weights_from_json(const Json& j, const Dataset& data);

/// {sigma_star, gamma, method, verified}
Json to_json(const SigmaCertificate& cert);
SigmaCertificate certificate_from_json(const Json& j);

Json to_json(const Violation& v, const Dataset& data);
Json to_json(const VerifyResult& r, const Dataset& data);

/// {sigma, sigma_certified, R, delta_hat, duality_gap, bound, prototype_count, satisfied}
Json to_json(const BoundReport& r);

Json to_json(const MarginCertificate& cert);

}  // namespace cnnbound
