#pragma once

#include <array>
#include <string>
#include <vector>

#include "bta/errors.hpp"

namespace bta {

/// Head coordinate: x toward the nose, y toward the left ear, z toward the
/// vertex, unit-sphere scalp model.
struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// (radius, polar angle in [0, pi], azimuth in (-pi, pi]) of `point` in the
/// frame anchored at `origin` with zenith +z and azimuth reference +x.
/// Degenerate cases: theta = 0 when the radius vanishes, phi = 0 when the
/// projection onto the xy-plane vanishes.
struct Spherical {
    double rho = 0.0;
    double theta = 0.0;
    double phi = 0.0;
};
Spherical spherical_from_cartesian(const Point3& point, const Point3& origin);

/// Channel-name -> scalp coordinate table plus the centrality points the
/// encoding frames are anchored at.
class Montage {
public:
    static constexpr double kMaxNorm = 1.2;

    /// Standard 10-20 positions with the common 10-10 extensions and both
    /// mastoids; centralities default to vertex + left/right mastoid.
    static Montage standard_10_20();

    /// Parse "name x y z" lines; '#' starts a comment.
    static Montage parse(const std::string& text);

    void add_channel(const std::string& name, Point3 p);
    void set_centralities(std::vector<Point3> points);

    bool has_channel(const std::string& name) const;
    /// Throws data_error for channels not in the table.
    const Point3& position(const std::string& name) const;
    const std::vector<std::pair<std::string, Point3>>& channels() const { return channels_; }
    const std::vector<Point3>& centralities() const { return centralities_; }

    std::string to_text() const;

private:
    std::vector<std::pair<std::string, Point3>> channels_;
    std::vector<Point3> centralities_;
};

}  // namespace bta
