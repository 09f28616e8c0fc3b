// Compile check for the header-only algebra layer; shared instantiations may
// migrate here if build times warrant it.
#include "gkd/exterior.hpp"
#include "gkd/frames.hpp"
#include "gkd/linalg.hpp"
#include "gkd/scalar.hpp"
