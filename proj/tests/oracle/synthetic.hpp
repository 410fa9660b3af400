#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>

namespace synth {

struct Text {
    std::string design;
    std::string testbench;
};

// A design with `signals` 4-bit signals: a fifth inputs, a fifth wires,
// the rest registers, wired together at random. Deterministic in `seed`.
inline Text synthetic(std::size_t signals, std::size_t cycles, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::size_t n_in = std::max<std::size_t>(1, signals / 5);
    std::size_t n_wire = signals / 5;
    std::size_t n_reg = signals - n_in - n_wire;
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    auto in = [&] { return "x" + std::to_string(pick(n_in)); };
    auto reg = [&] { return "r" + std::to_string(pick(n_reg)); };

    std::ostringstream d;
    d << "design synth" << signals << "\n";
    for (std::size_t i = 0; i < n_in; ++i) {
        d << "input x" << i << " : 4\n";
    }
    for (std::size_t i = 0; i < n_reg; ++i) {
        d << "reg r" << i << " : 4 = " << pick(16) << "\n";
    }
    for (std::size_t i = 0; i < n_wire; ++i) {
        d << "wire w" << i << " : 4\n";
    }
    for (std::size_t i = 0; i < n_wire; ++i) {
        std::string prev = i == 0 ? reg() : "w" + std::to_string(pick(i));
        d << "assign w" << i << " = (" << in() << " ^ " << reg() << ") & (" << reg() << " | " << prev << ")\n";
    }
    auto any = [&] {
        if (n_wire > 0 && pick(3) == 0) {
            return "w" + std::to_string(pick(n_wire));
        }
        return pick(2) == 0 ? in() : reg();
    };
    for (std::size_t i = 0; i < n_reg; ++i) {
        std::string self = "r" + std::to_string(i);
        d << "always " << self << " <= mux(" << in() << " < " << any() << ", " << any() << " + " << any() << ", "
          << self << " ^ " << any() << ")\n";
    }

    std::ostringstream tb;
    tb << "cycle";
    for (std::size_t i = 0; i < n_in; ++i) {
        tb << ",x" << i;
    }
    tb << "\n";
    for (std::size_t c = 0; c < cycles; ++c) {
        tb << c;
        for (std::size_t i = 0; i < n_in; ++i) {
            tb << "," << pick(16);
        }
        tb << "\n";
    }
    return {d.str(), tb.str()};
}

}  // namespace synth
