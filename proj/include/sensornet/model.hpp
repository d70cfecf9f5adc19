#pragma once

#include <cstddef>
#include <vector>

#include "sensornet/density.hpp"

namespace sensornet {

/// n sensors with transmission radius R deployed after a sink at 0 on [0, L].
/// Either one density shared by every distance or an explicit per-distance
/// list (distance i uses densities[i]).
class DeploymentModel {
public:
    static DeploymentModel shared(double L, double R, Density d);
    static DeploymentModel per_distance(double L, double R, std::vector<Density> ds);

    double length() const { return L_; }
    double radius() const { return R_; }
    bool is_shared() const { return shared_; }
    /// Largest n the model can describe (unbounded for shared models).
    std::size_t max_distances() const;

    const Density& density(std::size_t i) const { return shared_ ? densities_.front() : densities_.at(i); }
    const std::vector<Density>& densities() const { return densities_; }
    /// The n densities of the first n distances; throws DomainError if the
    /// per-distance list is shorter than n.
    std::vector<Density> assignment(std::size_t n) const;

    /// Same model with another radius.
    DeploymentModel with_radius(double R) const;

private:
    DeploymentModel(double L, double R, std::vector<Density> ds, bool shared);

    double L_;
    double R_;
    std::vector<Density> densities_;
    bool shared_;
};

}  // namespace sensornet
