#ifndef STABLE_STREAMS_VERSION_HPP
#define STABLE_STREAMS_VERSION_HPP

namespace stable_streams {

inline constexpr const char* kVersion = "0.1.0";

}

#endif
