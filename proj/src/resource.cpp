#include "ghzt/resource.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ghzt {

const char* to_string(LayoutMode mode) {
    switch (mode) {
        case LayoutMode::Standard: return "standard";
        case LayoutMode::DistributedMessage: return "distributed";
        case LayoutMode::MinimalResource: return "minimal";
    }
    return "?";
}

LayoutMode layout_mode_from_string(const std::string& name) {
    if (name == "standard") return LayoutMode::Standard;
    if (name == "distributed") return LayoutMode::DistributedMessage;
    if (name == "minimal") return LayoutMode::MinimalResource;
    throw std::invalid_argument("unknown layout mode: " + name);
}

ResourceLayout ResourceLayout::make(int m, int n, LayoutMode mode, int receiver,
                                    std::vector<int> holders) {
    if (m < 3) throw std::invalid_argument("need at least 3 participants");
    if (n < 1) throw std::invalid_argument("message width must be positive");
    if (m * n + n > 22) throw std::invalid_argument("configuration exceeds the 22-qubit cap");
    if (receiver < 0) receiver = m - 1;
    if (receiver < 1 || receiver > m - 1) {
        throw std::invalid_argument("receiver must be one of participants 1 .. m-1");
    }

    if (holders.empty()) {
        if (mode == LayoutMode::MinimalResource) {
            // One message qubit per participant: the first n non-receivers.
            for (int p = 0; static_cast<int>(holders.size()) < n; ++p) {
                if (p != receiver) holders.push_back(p);
            }
        } else {
            holders.assign(n, 0);
        }
    }
    if (static_cast<int>(holders.size()) != n) {
        throw std::invalid_argument("allocation must place every message qubit exactly once");
    }
    for (int p : holders) {
        if (p < 0 || p >= m) throw std::invalid_argument("allocation names an unknown participant");
        if (p == receiver) throw std::invalid_argument("the receiver cannot hold message qubits");
    }
    if (mode == LayoutMode::Standard) {
        for (int p : holders) {
            if (p != 0) {
                throw std::invalid_argument(
                    "standard mode keeps all message qubits with participant 0; "
                    "use distributed mode to spread them");
            }
        }
    }
    if (mode == LayoutMode::MinimalResource) {
        if (n > m - 1) {
            throw std::invalid_argument("minimal mode needs a distinct holder per message qubit");
        }
        std::vector<int> sorted = holders;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw std::invalid_argument(
                "minimal mode gives each participant one resource qubit, so no participant "
                "can hold two message qubits");
        }
    }

    ResourceLayout layout;
    layout.m = m;
    layout.n = n;
    layout.mode = mode;
    layout.receiver = receiver;
    layout.holders = std::move(holders);
    layout.total_qubits =
        mode == LayoutMode::MinimalResource ? n + (m + n - 1) : n + m * n;
    return layout;
}

int ResourceLayout::qubit_of(int participant, int instance) const {
    if (participant < 0 || participant >= m) throw std::out_of_range("participant out of range");
    if (mode != LayoutMode::MinimalResource) {
        if (instance < 0 || instance >= n) throw std::out_of_range("instance out of range");
        return (participant + 1) * n + instance;
    }
    if (participant == receiver) {
        if (instance < 0 || instance >= n) throw std::out_of_range("instance out of range");
        return n + (m - 1) + instance;
    }
    if (instance != 0) throw std::out_of_range("non-receivers own a single qubit in minimal mode");
    int rank = participant < receiver ? participant : participant - 1;
    return n + rank;
}

std::vector<int> ResourceLayout::receiver_qubits() const {
    std::vector<int> qs(n);
    for (int j = 0; j < n; ++j) qs[j] = qubit_of(receiver, j);
    return qs;
}

std::map<int, std::vector<int>> ResourceLayout::message_allocation() const {
    std::map<int, std::vector<int>> alloc;
    for (int j = 0; j < n; ++j) alloc[holders[j]].push_back(j);
    return alloc;
}

StateVector make_ghz(int size) {
    if (size < 2) throw std::invalid_argument("a shared state needs at least 2 qubits");
    StateVector s(size);
    std::vector<cdouble> amps(s.dim(), cdouble(0));
    const double r = std::sqrt(0.5);
    amps[0] = cdouble(r);
    amps[s.dim() - 1] = cdouble(r);
    return StateVector::from_amplitudes(size, std::move(amps));
}

StateVector make_resource(const ResourceLayout& layout) {
    const int width = layout.num_resource_qubits();
    if (layout.mode == LayoutMode::MinimalResource) {
        return make_ghz(width);
    }
    // n interleaved m-qubit GHZ instances: instance j spans local qubits
    // p*n + j over participants p, so its mask picks every n-th bit.
    std::vector<std::uint64_t> masks(layout.n, 0);
    for (int j = 0; j < layout.n; ++j) {
        for (int p = 0; p < layout.m; ++p) {
            masks[j] |= std::uint64_t{1} << (p * layout.n + j);
        }
    }
    std::vector<cdouble> amps(std::uint64_t{1} << width, cdouble(0));
    const double scale = std::pow(0.5, layout.n / 2.0);
    for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << layout.n); ++pattern) {
        std::uint64_t index = 0;
        for (int j = 0; j < layout.n; ++j) {
            if (pattern & (std::uint64_t{1} << j)) index |= masks[j];
        }
        amps[index] = cdouble(scale);
    }
    return StateVector::from_amplitudes(width, std::move(amps));
}

StateVector MessageState::to_state() const {
    validate();
    return StateVector::from_amplitudes(n, amplitudes);
}

MessageState MessageState::from_state(const StateVector& state) {
    return MessageState{state.num_qubits(), state.amplitudes()};
}

void MessageState::validate() const {
    if (n < 1) throw std::invalid_argument("message width must be positive");
    if (amplitudes.size() != (std::uint64_t{1} << n)) {
        throw std::invalid_argument("message amplitude count does not match width");
    }
    double norm = 0.0;
    for (const cdouble& a : amplitudes) norm += std::norm(a);
    if (std::abs(norm - 1.0) > kNormTolerance) {
        throw std::invalid_argument("message amplitudes are not normalized");
    }
}

MessageState random_message(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("message width must be positive");
    Rng rng(seed);
    std::vector<cdouble> amps(std::uint64_t{1} << n);
    double norm = 0.0;
    for (cdouble& a : amps) {
        double re = standard_normal(rng);
        double im = standard_normal(rng);
        a = cdouble(re, im);
        norm += std::norm(a);
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (cdouble& a : amps) a *= scale;
    return MessageState{n, std::move(amps)};
}

StateVector compose(const MessageState& message, const StateVector& resource) {
    message.validate();
    const int total = message.n + resource.num_qubits();
    std::vector<cdouble> amps(std::uint64_t{1} << total, cdouble(0));
    const std::uint64_t md = std::uint64_t{1} << message.n;
    for (std::uint64_t r = 0; r < resource.dim(); ++r) {
        const cdouble ra = resource.amplitude(r);
        if (ra == cdouble(0)) continue;
        for (std::uint64_t i = 0; i < md; ++i) {
            amps[(r << message.n) | i] = message.amplitudes[i] * ra;
        }
    }
    return StateVector::from_amplitudes(total, std::move(amps));
}

}  // namespace ghzt
