#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace kvnlab::cli::svg {

inline constexpr int width = 960;
inline constexpr int height = 540;

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color;
    bool dashed = false;
};

std::string line_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                      const std::vector<Series>& series);

// values is row-major with rows along x (nx) and columns along y (ny).
std::string heatmap(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                    double x0, double x1, double y0, double y1, std::size_t nx, std::size_t ny,
                    const std::vector<double>& values);

}  // namespace kvnlab::cli::svg
