#include "sclp/types.hpp"

namespace sclp {

std::string var_name(const VarSpace& space, VarId v) {
    if (space.is_control(v)) return "u" + std::to_string(space.control_index(v) + 1);
    if (space.is_state(v)) return "xdot" + std::to_string(space.state_index(v) + 1);
    return "var?";
}

}  // namespace sclp
