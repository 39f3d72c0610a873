#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace sclp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Variables of the rates problem carry a single flat id:
//   controls u_j (including the I capacity slacks) occupy [0, J+I),
//   state derivatives xdot_k (including the L structural states) occupy
//   [J+I, J+I+K+L).
struct VarId {
    int id = -1;

    constexpr VarId() = default;
    constexpr explicit VarId(int raw) : id(raw) {}

    static constexpr VarId control(int j) { return VarId(j); }
    static VarId state(int k, int num_controls) { return VarId(num_controls + k); }

    constexpr bool valid() const { return id >= 0; }
    constexpr bool operator==(const VarId&) const = default;
    constexpr auto operator<=>(const VarId&) const = default;
};

struct VarSpace {
    int num_controls = 0;  // J + I
    int num_states = 0;    // K + L

    bool is_control(VarId v) const { return v.id >= 0 && v.id < num_controls; }
    bool is_state(VarId v) const {
        return v.id >= num_controls && v.id < num_controls + num_states;
    }
    int control_index(VarId v) const { return v.id; }
    int state_index(VarId v) const { return v.id - num_controls; }
    int total() const { return num_controls + num_states; }
};

std::string var_name(const VarSpace& space, VarId v);

}  // namespace sclp
