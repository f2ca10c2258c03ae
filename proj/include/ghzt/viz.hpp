#pragma once

#include <string>
#include <vector>

#include "ghzt/qstate.hpp"

// Hinton diagrams: one panel per component (real, imaginary), square area
// proportional to the entry's magnitude, white for positive and black for
// negative on a mid-gray field.

namespace ghzt {

struct HintonDiagram {
    int num_qubits = 0;
    std::vector<double> real;  // signed entries, row-major
    std::vector<double> imag;
    double max_magnitude = 0.0;  // shared scale across both panels
    std::vector<std::string> labels;

    std::uint64_t dim() const { return std::uint64_t{1} << num_qubits; }
};

HintonDiagram build_hinton(const DensityMatrix& rho);

struct HintonStyle {
    double cell_size = 40.0;
    std::string positive_fill = "#FFFFFF";
    std::string negative_fill = "#000000";
    std::string background = "#808080";
    std::string grid = "#A9A9A9";
};

// Deterministic, byte-stable SVG: identical diagrams render to identical
// bytes.  Square side = cell_size * sqrt(magnitude / max-magnitude), so the
// area carries the value; numbers are printed in shortest round-trip form
// and magnitudes can be recovered from the side lengths.
std::string render_svg(const HintonDiagram& diagram, const HintonStyle& style = {});

// Input and output densities of one run on a shared scale, for eyeballing
// what a lossy branch did to the message.
std::string render_svg_pair(const HintonDiagram& input, const HintonDiagram& output,
                            const HintonStyle& style = {});

// Terminal rendering with five brightness buckets per cell and a sign
// prefix.  `width` must be at least the matrix dimension.
std::string render_text(const HintonDiagram& diagram, int width = 80);

}  // namespace ghzt
