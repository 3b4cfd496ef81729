#ifndef PLAB_VERSION_HPP
#define PLAB_VERSION_HPP

namespace plab {

inline constexpr const char* kVersion = "0.1.0";

}

#endif
