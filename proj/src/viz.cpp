#include "ghzt/viz.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace ghzt {

namespace {

// Shortest decimal form that parses back to the exact double.
std::string fmt(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

struct PanelGeometry {
    double label_width;
    double top;  // title + column labels
    double grid;
};

PanelGeometry geometry(const HintonDiagram& d, const HintonStyle& style) {
    PanelGeometry g;
    g.label_width = 10.0 + 8.0 * (d.num_qubits + 2);
    g.top = 42.0;
    g.grid = style.cell_size * static_cast<double>(d.dim());
    return g;
}

void emit_panel(std::string& out, const HintonDiagram& d, const std::vector<double>& values,
                const std::string& title, double ox, double oy, const HintonStyle& style) {
    const PanelGeometry g = geometry(d, style);
    const double x0 = ox + g.label_width;
    const double y0 = oy + g.top;
    const std::uint64_t dim = d.dim();

    out += "<text x=\"" + fmt(x0 + g.grid / 2) + "\" y=\"" + fmt(oy + 16.0) +
           "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"14\">" + title +
           "</text>\n";
    out += "<rect x=\"" + fmt(x0) + "\" y=\"" + fmt(y0) + "\" width=\"" + fmt(g.grid) +
           "\" height=\"" + fmt(g.grid) + "\" fill=\"" + style.background + "\"/>\n";
    for (std::uint64_t i = 0; i <= dim; ++i) {
        const double t = style.cell_size * static_cast<double>(i);
        out += "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0 + t) + "\" x2=\"" + fmt(x0 + g.grid) +
               "\" y2=\"" + fmt(y0 + t) + "\" stroke=\"" + style.grid + "\" stroke-width=\"1\"/>\n";
        out += "<line x1=\"" + fmt(x0 + t) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x0 + t) +
               "\" y2=\"" + fmt(y0 + g.grid) + "\" stroke=\"" + style.grid +
               "\" stroke-width=\"1\"/>\n";
    }
    for (std::uint64_t i = 0; i < dim; ++i) {
        const double center = style.cell_size * (static_cast<double>(i) + 0.5);
        out += "<text x=\"" + fmt(x0 + center) + "\" y=\"" + fmt(y0 - 6.0) +
               "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">" +
               d.labels[i] + "</text>\n";
        out += "<text x=\"" + fmt(x0 - 6.0) + "\" y=\"" + fmt(y0 + center + 4.0) +
               "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"12\">" + d.labels[i] +
               "</text>\n";
    }
    if (d.max_magnitude <= 0.0) return;
    for (std::uint64_t r = 0; r < dim; ++r) {
        for (std::uint64_t c = 0; c < dim; ++c) {
            const double value = values[r * dim + c];
            const double mag = std::abs(value);
            if (mag == 0.0) continue;
            const double side = style.cell_size * std::sqrt(mag / d.max_magnitude);
            const double cx = x0 + style.cell_size * (static_cast<double>(c) + 0.5);
            const double cy = y0 + style.cell_size * (static_cast<double>(r) + 0.5);
            out += "<rect x=\"" + fmt(cx - side / 2) + "\" y=\"" + fmt(cy - side / 2) +
                   "\" width=\"" + fmt(side) + "\" height=\"" + fmt(side) + "\" fill=\"" +
                   (value > 0.0 ? style.positive_fill : style.negative_fill) + "\"/>\n";
        }
    }
}

std::string svg_document(const std::string& body, double width, double height) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
           fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n" + body +
           "</svg>\n";
}

}  // namespace

HintonDiagram build_hinton(const DensityMatrix& rho) {
    HintonDiagram d;
    d.num_qubits = rho.num_qubits();
    const std::uint64_t dim = rho.dim();
    d.real.resize(dim * dim);
    d.imag.resize(dim * dim);
    for (std::uint64_t r = 0; r < dim; ++r) {
        for (std::uint64_t c = 0; c < dim; ++c) {
            const cdouble v = rho.entry(r, c);
            d.real[r * dim + c] = v.real();
            d.imag[r * dim + c] = v.imag();
            d.max_magnitude =
                std::max({d.max_magnitude, std::abs(v.real()), std::abs(v.imag())});
        }
    }
    for (std::uint64_t i = 0; i < dim; ++i) {
        std::string label = "|";
        for (int q = 0; q < d.num_qubits; ++q) label += (i >> q) & 1 ? '1' : '0';
        label += "⟩";
        d.labels.push_back(label);
    }
    return d;
}

std::string render_svg(const HintonDiagram& diagram, const HintonStyle& style) {
    const PanelGeometry g = geometry(diagram, style);
    const double panel_w = g.label_width + g.grid;
    const double width = 2 * panel_w + 24.0 + 10.0;
    const double height = g.top + g.grid + 10.0;
    std::string body;
    emit_panel(body, diagram, diagram.real, "Re(ρ)", 0.0, 0.0, style);
    emit_panel(body, diagram, diagram.imag, "Im(ρ)", panel_w + 24.0, 0.0, style);
    return svg_document(body, width, height);
}

std::string render_svg_pair(const HintonDiagram& input, const HintonDiagram& output,
                            const HintonStyle& style) {
    const PanelGeometry gi = geometry(input, style);
    const PanelGeometry go = geometry(output, style);
    const double row_w_in = 2 * (gi.label_width + gi.grid) + 24.0;
    const double row_w_out = 2 * (go.label_width + go.grid) + 24.0;
    const double row_h_in = gi.top + gi.grid + 18.0;
    std::string body;
    emit_panel(body, input, input.real, "ρ_in Re", 0.0, 0.0, style);
    emit_panel(body, input, input.imag, "ρ_in Im", gi.label_width + gi.grid + 24.0, 0.0,
               style);
    emit_panel(body, output, output.real, "ρ_out Re", 0.0, row_h_in, style);
    emit_panel(body, output, output.imag, "ρ_out Im", go.label_width + go.grid + 24.0,
               row_h_in, style);
    const double width = std::max(row_w_in, row_w_out) + 10.0;
    const double height = row_h_in + go.top + go.grid + 10.0;
    return svg_document(body, width, height);
}

std::string render_text(const HintonDiagram& diagram, int width) {
    const std::uint64_t dim = diagram.dim();
    if (width < static_cast<int>(dim)) {
        throw std::invalid_argument("width is smaller than the matrix dimension");
    }
    auto bucket = [&](double mag) -> const char* {
        if (diagram.max_magnitude <= 0.0) return " ";
        const double ratio = mag / diagram.max_magnitude;
        if (ratio < 0.05) return " ";
        if (ratio < 0.25) return "░";
        if (ratio < 0.5) return "▒";
        if (ratio < 0.8) return "▓";
        return "█";
    };
    std::string out;
    for (int panel = 0; panel < 2; ++panel) {
        const std::vector<double>& values = panel == 0 ? diagram.real : diagram.imag;
        out += panel == 0 ? "Re:\n" : "Im:\n";
        for (std::uint64_t r = 0; r < dim; ++r) {
            out += "  ";
            for (std::uint64_t c = 0; c < dim; ++c) {
                const double v = values[r * dim + c];
                const char* block = bucket(std::abs(v));
                if (block[0] == ' ') {
                    out += "  ";
                } else {
                    out += v < 0.0 ? '-' : '+';
                    out += block;
                }
                if (c + 1 < dim) out += ' ';
            }
            out += "\n";
        }
    }
    out += "scale: ░ < 0.25  ▒ < 0.5  ▓ < 0.8  █ ≥ 0.8 of max; "
           "+/- is the entry's sign\n";
    return out;
}

}  // namespace ghzt
