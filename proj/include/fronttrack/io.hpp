// io.hpp: CSV and JSON emission. Every file carries a schema tag; doubles
// round-trip (shortest representation in JSON via the serializer, 17
// significant digits in CSV).
#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <string>
#include <vector>

#include <json.hpp>

#include "fronttrack/engine.hpp"
#include "fronttrack/godunov.hpp"
#include "fronttrack/weight.hpp"

namespace fronttrack {

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::string& kind,
              const std::vector<std::string>& columns) {
        out_.open(path);
        if (!out_) throw ConfigError("cannot open output file " + path.string());
        out_ << "# fronttrack " << kind << " v1\n";
        for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
        out_ << "\n";
        out_ << std::setprecision(17);
    }

    template <typename... Ts>
    void row(const Ts&... fields) {
        bool first = true;
        ((out_ << (first ? "" : ","), first = false, out_ << fields), ...);
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

inline nlohmann::json snapshot_json(const PiecewiseConstant<Vec2>& snap, double time,
                                    const WeightProfile* weights) {
    nlohmann::json j;
    j["schema"] = "fronttrack-snapshot v1";
    j["time"] = time;
    j["breakpoints"] = snap.xs;
    auto& states = j["states"] = nlohmann::json::array();
    for (const Vec2& v : snap.values) states.push_back({v.rho, v.mom});
    if (weights) {
        j["weight_breakpoints"] = weights->xs;
        j["weights"] = weights->values;
    } else {
        j["weights"] = nlohmann::json::array();
    }
    return j;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file " + path.string());
    out << j.dump(2) << "\n";
}

// Grid snapshots: CSV (x_center, rho, mom) and JSON, plus ingestion of the
// same formats so externally produced reference solutions can be audited.
inline void write_grid_csv(const std::filesystem::path& path, const GridSolution& g) {
    CsvWriter csv(path, "grid-snapshot", {"x_center", "rho", "mom"});
    for (std::size_t i = 0; i < g.cells.size(); ++i) csv.row(g.center(i), g.cells[i].rho, g.cells[i].mom);
}

inline GridSolution read_grid_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open grid snapshot " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("# fronttrack grid-snapshot", 0) != 0)
        throw ConfigError(path.string() + ": missing grid-snapshot schema line");
    std::getline(in, line);  // header row
    std::vector<double> centers;
    GridSolution g;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::stringstream ss(line);
        double x = 0.0, rho = 0.0, mom = 0.0;
        if (!(ss >> x >> rho >> mom)) throw ConfigError(path.string() + ": malformed row '" + line + "'");
        centers.push_back(x);
        g.cells.push_back({rho, mom});
    }
    if (centers.size() < 2) throw ConfigError(path.string() + ": needs at least two cells");
    g.dx = centers[1] - centers[0];
    for (std::size_t i = 1; i + 1 < centers.size(); ++i)
        if (std::fabs(centers[i + 1] - centers[i] - g.dx) > 1e-9 * std::max(1.0, std::fabs(g.dx)))
            throw ConfigError(path.string() + ": cell centers are not uniformly spaced");
    g.x0 = centers.front() - 0.5 * g.dx;
    return g;
}

inline nlohmann::json grid_json(const GridSolution& g) {
    nlohmann::json j;
    j["schema"] = "fronttrack-grid v1";
    j["time"] = g.time;
    j["x0"] = g.x0;
    j["dx"] = g.dx;
    auto& cells = j["cells"] = nlohmann::json::array();
    for (const Vec2& c : g.cells) cells.push_back({c.rho, c.mom});
    return j;
}

inline GridSolution read_grid_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open grid snapshot " + path.string());
    nlohmann::json j;
    in >> j;
    if (j.value("schema", "") != "fronttrack-grid v1")
        throw ConfigError(path.string() + ": unexpected schema");
    GridSolution g;
    g.time = j.at("time").get<double>();
    g.x0 = j.at("x0").get<double>();
    g.dx = j.at("dx").get<double>();
    for (const auto& c : j.at("cells")) g.cells.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
    return g;
}

inline void write_event_log(const std::filesystem::path& path, const std::vector<EventRecord>& events) {
    CsvWriter csv(path, "event-log",
                  {"t", "x", "incoming_ids", "outgoing_ids", "solver_used", "dL", "dQ", "np_strength"});
    for (const EventRecord& ev : events) {
        std::string in = std::to_string(ev.in_ids[0]) + ";" + std::to_string(ev.in_ids[1]);
        std::string out;
        for (std::size_t i = 0; i < ev.out_ids.size(); ++i)
            out += (i ? ";" : "") + std::to_string(ev.out_ids[i]);
        csv.row(ev.t, ev.x, in, out, ev.solver, ev.dl, ev.dq, ev.np_strength);
    }
}

}  // namespace fronttrack
