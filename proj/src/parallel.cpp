#include "bmc/parallel.hpp"

namespace bmc::par {

namespace {
bool g_enabled = true;
}

bool enabled() { return g_enabled; }
void set_enabled(bool on) { g_enabled = on; }

}  // namespace bmc::par
