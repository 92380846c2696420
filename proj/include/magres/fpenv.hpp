#pragma once

// Spins pinned along an axis have transverse components that decay into the
// subnormal range, where x86 arithmetic is roughly ten times slower. The film
// loops flush subnormals to zero while they run.

#if defined(__SSE__) || defined(_M_X64)
#include <xmmintrin.h>
#define MAGRES_HAVE_MXCSR 1
#endif

namespace magres {

/// Enables flush-to-zero and denormals-are-zero for the current thread until
/// destruction; a no-op on targets without MXCSR.
class FlushDenormals {
public:
    FlushDenormals() {
#ifdef MAGRES_HAVE_MXCSR
        saved_ = _mm_getcsr();
        _mm_setcsr(saved_ | kFtz | kDaz);
#endif
    }
    ~FlushDenormals() {
#ifdef MAGRES_HAVE_MXCSR
        _mm_setcsr(saved_);
#endif
    }
    FlushDenormals(const FlushDenormals&) = delete;
    FlushDenormals& operator=(const FlushDenormals&) = delete;

private:
#ifdef MAGRES_HAVE_MXCSR
    static constexpr unsigned kFtz = 0x8000;
    static constexpr unsigned kDaz = 0x0040;
    unsigned saved_ = 0;
#endif
};

}  // namespace magres
