#include "sensornet/model.hpp"

#include <cmath>
#include <limits>

#include "sensornet/errors.hpp"

namespace sensornet {

DeploymentModel::DeploymentModel(double L, double R, std::vector<Density> ds, bool shared)
    : L_(L), R_(R), densities_(std::move(ds)), shared_(shared) {
    if (!(std::isfinite(L) && L > 0.0)) throw DomainError("model: L must be positive");
    if (!(std::isfinite(R) && R > 0.0)) throw DomainError("model: R must be positive");
    if (densities_.empty()) throw DomainError("model: no density given");
    for (const auto& d : densities_)
        if (d.length() != L) throw DomainError("model: every density must be normalized on [0, L]");
}

DeploymentModel DeploymentModel::shared(double L, double R, Density d) {
    return DeploymentModel(L, R, {std::move(d)}, true);
}

DeploymentModel DeploymentModel::per_distance(double L, double R, std::vector<Density> ds) {
    return DeploymentModel(L, R, std::move(ds), false);
}

std::size_t DeploymentModel::max_distances() const {
    return shared_ ? std::numeric_limits<std::size_t>::max() : densities_.size();
}

std::vector<Density> DeploymentModel::assignment(std::size_t n) const {
    if (n > max_distances())
        throw DomainError("model: per-distance list has " + std::to_string(densities_.size()) +
                          " entries, " + std::to_string(n) + " requested");
    if (!shared_) return {densities_.begin(), densities_.begin() + static_cast<std::ptrdiff_t>(n)};
    return std::vector<Density>(n, densities_.front());
}

DeploymentModel DeploymentModel::with_radius(double R) const {
    return DeploymentModel(L_, R, densities_, shared_);
}

}  // namespace sensornet
