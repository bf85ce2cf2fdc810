#include "modexact/config.hpp"

#include <cstdlib>
#include <sstream>

namespace modexact {

static Caps parse_env_caps() {
    Caps c;
    const char* env = std::getenv("MODEXACT_CAPS");
    if (!env) return c;
    std::stringstream ss(env);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) continue;
        std::string key = item.substr(0, eq);
        long long val;
        try {
            val = std::stoll(item.substr(eq + 1));
        } catch (...) {
            continue;
        }
        if (key == "hom") c.hom = val;
        else if (key == "subgroups") c.subgroups = val;
        else if (key == "order") c.order = val;
        else if (key == "steps") c.max_steps = static_cast<int>(val);
    }
    return c;
}

Caps& caps() {
    static Caps c = parse_env_caps();
    return c;
}

bool& self_check() {
    static bool on = false;
    return on;
}

}  // namespace modexact
