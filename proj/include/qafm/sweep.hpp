#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qafm/errors.hpp"
#include "qafm/io.hpp"
#include "qafm/oscillator.hpp"
#include "qafm/quantum.hpp"

namespace qafm {

enum class AxisScale { linear, log };

struct Axis {
    std::string name;
    double min = 0.0;
    double max = 1.0;
    std::size_t count = 2;
    AxisScale scale = AxisScale::linear;

    void validate() const {
        constexpr const char* mod = "sweep-maps";
        detail::require(count >= 2, mod, "axis '" + name + "' needs at least 2 points");
        detail::require(min < max, mod, "axis '" + name + "' needs min < max");
        detail::require(scale == AxisScale::linear || min > 0.0, mod, "log axis '" + name + "' needs min > 0");
    }

    /// i-th sample; the end points are hit exactly.
    double at(std::size_t i) const {
        if (i == 0) return min;
        if (i + 1 == count) return max;
        const double f = static_cast<double>(i) / static_cast<double>(count - 1);
        if (scale == AxisScale::log) return std::exp(std::log(min) + f * (std::log(max) - std::log(min)));
        return min + f * (max - min);
    }

    std::vector<double> samples() const {
        std::vector<double> v(count);
        for (std::size_t i = 0; i < count; ++i) v[i] = at(i);
        return v;
    }
};

struct SweepGrid {
    Axis x;
    Axis y;
    std::map<std::string, double> fixed;

    std::size_t size() const { return x.count * y.count; }
    void validate() const {
        x.validate();
        y.validate();
    }
};

/// Row-major (y outer, x inner) scalar field; mask[i] == 1 means values[i] is meaningful.
struct MapResult {
    SweepGrid grid;
    std::vector<double> values;
    std::vector<std::uint8_t> mask;
    nlohmann::json meta;

    std::size_t index(std::size_t ix, std::size_t iy) const { return iy * grid.x.count + ix; }
    bool valid(std::size_t ix, std::size_t iy) const { return mask[index(ix, iy)] != 0; }
};

namespace detail {

/// Evaluates cell(i) for every i in [0, n) into a preallocated buffer. Threads take
/// contiguous blocks, so the result does not depend on the thread count.
template <class Cell>
void parallel_fill(std::size_t n, unsigned threads, Cell&& cell) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) cell(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t block = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = t * block;
        const std::size_t hi = std::min(n, lo + block);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &cell] {
            for (std::size_t i = lo; i < hi; ++i) cell(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace detail

/// Softened frequency Omega over z0 (x axis, m) and omega1 (y axis, rad/s).
/// Cells with z0 <= z_crit(omega1) are masked.
inline MapResult omega_map(const SweepGrid& grid, double mass, double alpha, unsigned threads = 1) {
    grid.validate();
    detail::require(mass > 0.0 && alpha > 0.0, "sweep-maps", "mass and alpha must be positive");
    MapResult res;
    res.grid = grid;
    res.values.assign(grid.size(), 0.0);
    res.mask.assign(grid.size(), 0);
    const auto xs = grid.x.samples();
    const auto ys = grid.y.samples();

    detail::parallel_fill(grid.size(), threads, [&](std::size_t i) {
        const std::size_t ix = i % grid.x.count;
        const std::size_t iy = i / grid.x.count;
        EffectiveOscillator osc{mass, ys[iy], xs[ix], alpha};
        if (!osc.oscillates()) return;
        try {
            res.values[i] = reduce(osc).omega;
            res.mask[i] = 1;
        } catch (const SnapInError&) {
        }
    });

    res.meta = {{"map", "omega"},
                {"x_axis", {{"name", grid.x.name}, {"min", grid.x.min}, {"max", grid.x.max}, {"count", grid.x.count},
                            {"scale", grid.x.scale == AxisScale::log ? "log" : "linear"}}},
                {"y_axis", {{"name", grid.y.name}, {"min", grid.y.min}, {"max", grid.y.max}, {"count", grid.y.count},
                            {"scale", grid.y.scale == AxisScale::log ? "log" : "linear"}}},
                {"fixed", {{"m", mass}, {"alpha", alpha}}}};
    for (const auto& [k, v] : grid.fixed) res.meta["fixed"][k] = v;
    return res;
}

/// Long-format CSV, one row per cell in row-major order. Masked cells leave Omega empty.
inline std::string map_to_csv(const MapResult& map) {
    io::CsvWriter w;
    w.comment("meta: " + map.meta.dump());
    w.header({"omega1_rad_s", "z0_m", "Omega_rad_s", "valid"});
    for (std::size_t iy = 0; iy < map.grid.y.count; ++iy) {
        for (std::size_t ix = 0; ix < map.grid.x.count; ++ix) {
            const std::size_t i = map.index(ix, iy);
            w.field(map.grid.y.at(iy)).field(map.grid.x.at(ix));
            if (map.mask[i]) w.field(map.values[i]); else w.field(std::string_view{});
            w.field_int(map.mask[i]).end_row();
        }
    }
    return w.str();
}

struct TracePoint {
    double chi = 0.0;
    QuadratureState free;
    QuadratureState squeezed;
};

/// Free and squeezed quadratures along chis, in input order.
inline std::vector<TracePoint> uncertainty_trace(const std::vector<double>& chis, const ThermalEnvironment& env,
                                                 double r) {
    std::vector<TracePoint> out;
    out.reserve(chis.size());
    for (double chi : chis) {
        TracePoint p;
        p.chi = chi;
        p.free = free_quadratures(env, chi);
        p.squeezed = apply_squeezing(p.free, r);
        out.push_back(p);
    }
    return out;
}

inline std::string trace_to_csv(const std::vector<TracePoint>& trace, const nlohmann::json& meta) {
    io::CsvWriter w;
    w.comment("meta: " + meta.dump());
    w.header({"chi", "dX1_free", "dX2_free", "dX1_squeezed", "dX2_squeezed", "product"});
    for (const auto& p : trace) {
        w.field(p.chi).field(p.free.dX1).field(p.free.dX2).field(p.squeezed.dX1).field(p.squeezed.dX2);
        w.field(p.squeezed.product()).end_row();
    }
    return w.str();
}

} // namespace qafm
