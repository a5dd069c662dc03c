#include "bta/montage.hpp"

#include <cmath>
#include <sstream>

namespace bta {

Spherical spherical_from_cartesian(const Point3& point, const Point3& origin) {
    const double vx = point.x - origin.x;
    const double vy = point.y - origin.y;
    const double vz = point.z - origin.z;
    Spherical s;
    s.rho = std::sqrt(vx * vx + vy * vy + vz * vz);
    s.theta = s.rho == 0.0 ? 0.0 : std::acos(std::min(1.0, std::max(-1.0, vz / s.rho)));
    if (vx == 0.0 && vy == 0.0) {
        s.phi = 0.0;
    } else {
        s.phi = std::atan2(vy, vx);
        if (s.phi <= -M_PI) s.phi = M_PI;  // fold -pi onto +pi
    }
    return s;
}

namespace {

Point3 from_polar(double polar_deg, double azimuth_deg) {
    const double p = polar_deg * M_PI / 180.0;
    const double a = azimuth_deg * M_PI / 180.0;
    return {std::sin(p) * std::cos(a), std::sin(p) * std::sin(a), std::cos(p)};
}

Point3 arc_midpoint(const Point3& a, const Point3& b) {
    const double sx = a.x + b.x, sy = a.y + b.y, sz = a.z + b.z;
    const double n = std::sqrt(sx * sx + sy * sy + sz * sz);
    return {sx / n, sy / n, sz / n};
}

}  // namespace

Montage Montage::standard_10_20() {
    Montage m;
    // midline: 10/30/50/70/90 % of the nasion-inion arc
    m.add_channel("Fpz", from_polar(72, 0));
    m.add_channel("Fz", from_polar(36, 0));
    m.add_channel("Cz", from_polar(0, 0));
    m.add_channel("Pz", from_polar(36, 180));
    m.add_channel("Oz", from_polar(72, 180));
    // outer ring (72 degrees from vertex), azimuth steps of 36 degrees;
    // +y is the left ear, so left-hemisphere channels have positive azimuth
    m.add_channel("Fp1", from_polar(72, 18));
    m.add_channel("Fp2", from_polar(72, -18));
    m.add_channel("F7", from_polar(72, 54));
    m.add_channel("F8", from_polar(72, -54));
    m.add_channel("T3", from_polar(72, 90));
    m.add_channel("T4", from_polar(72, -90));
    m.add_channel("T5", from_polar(72, 126));
    m.add_channel("T6", from_polar(72, -126));
    m.add_channel("O1", from_polar(72, 162));
    m.add_channel("O2", from_polar(72, -162));
    // central coronal line
    m.add_channel("C3", from_polar(36, 90));
    m.add_channel("C4", from_polar(36, -90));
    // intermediate positions sit midway along the connecting arcs
    m.add_channel("F3", arc_midpoint(m.position("Fz"), m.position("F7")));
    m.add_channel("F4", arc_midpoint(m.position("Fz"), m.position("F8")));
    m.add_channel("P3", arc_midpoint(m.position("Pz"), m.position("T5")));
    m.add_channel("P4", arc_midpoint(m.position("Pz"), m.position("T6")));
    // 10-10 extensions used by common caps
    m.add_channel("AFz", arc_midpoint(m.position("Fpz"), m.position("Fz")));
    m.add_channel("FCz", arc_midpoint(m.position("Fz"), m.position("Cz")));
    m.add_channel("CPz", arc_midpoint(m.position("Cz"), m.position("Pz")));
    m.add_channel("POz", arc_midpoint(m.position("Pz"), m.position("Oz")));
    m.add_channel("AF3", arc_midpoint(m.position("Fp1"), m.position("F3")));
    m.add_channel("AF4", arc_midpoint(m.position("Fp2"), m.position("F4")));
    m.add_channel("FC1", arc_midpoint(m.position("F3"), m.position("Cz")));
    m.add_channel("FC2", arc_midpoint(m.position("F4"), m.position("Cz")));
    m.add_channel("FC5", arc_midpoint(m.position("F7"), m.position("C3")));
    m.add_channel("FC6", arc_midpoint(m.position("F8"), m.position("C4")));
    m.add_channel("CP1", arc_midpoint(m.position("C3"), m.position("Pz")));
    m.add_channel("CP2", arc_midpoint(m.position("C4"), m.position("Pz")));
    m.add_channel("CP5", arc_midpoint(m.position("T3"), m.position("P3")));
    m.add_channel("CP6", arc_midpoint(m.position("T4"), m.position("P4")));
    m.add_channel("PO3", arc_midpoint(m.position("P3"), m.position("O1")));
    m.add_channel("PO4", arc_midpoint(m.position("P4"), m.position("O2")));
    // modern temporal aliases
    m.add_channel("T7", m.position("T3"));
    m.add_channel("T8", m.position("T4"));
    m.add_channel("P7", m.position("T5"));
    m.add_channel("P8", m.position("T6"));
    // mastoids: below and behind the ears
    const Point3 left_mastoid = from_polar(110, 100);
    const Point3 right_mastoid = from_polar(110, -100);
    m.add_channel("A1", left_mastoid);
    m.add_channel("A2", right_mastoid);
    m.add_channel("M1", left_mastoid);
    m.add_channel("M2", right_mastoid);

    m.set_centralities({{0.0, 0.0, 1.0}, left_mastoid, right_mastoid});
    return m;
}

void Montage::add_channel(const std::string& name, Point3 p) {
    if (has_channel(name))
        throw data_error("Montage: duplicate channel '" + name + "'");
    const double norm = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
    if (norm > kMaxNorm)
        throw data_error("Montage: channel '" + name + "' lies outside the head model");
    channels_.emplace_back(name, p);
}

void Montage::set_centralities(std::vector<Point3> points) {
    if (points.empty()) throw config_error("Montage: at least one centrality required");
    centralities_ = std::move(points);
}

bool Montage::has_channel(const std::string& name) const {
    for (const auto& [n, p] : channels_)
        if (n == name) return true;
    return false;
}

const Point3& Montage::position(const std::string& name) const {
    for (const auto& [n, p] : channels_)
        if (n == name) return p;
    throw data_error("Montage: unknown channel '" + name + "'");
}

Montage Montage::parse(const std::string& text) {
    Montage m;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string name;
        double x, y, z;
        if (!(ls >> name)) continue;  // blank line
        if (!(ls >> x >> y >> z))
            throw data_error("Montage: malformed line '" + line + "'");
        m.add_channel(name, {x, y, z});
    }
    if (m.channels_.empty()) throw data_error("Montage: no channels in file");
    // default centrality frames: vertex plus both mastoid points
    m.centralities_ = {{0.0, 0.0, 1.0}, from_polar(110, 100), from_polar(110, -100)};
    return m;
}

std::string Montage::to_text() const {
    std::ostringstream out;
    out.precision(17);
    for (const auto& [name, p] : channels_)
        out << name << " " << p.x << " " << p.y << " " << p.z << "\n";
    return out.str();
}

}  // namespace bta
