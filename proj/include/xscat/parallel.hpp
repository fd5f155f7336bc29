#ifndef XSCAT_PARALLEL_HPP
#define XSCAT_PARALLEL_HPP

#include <functional>

namespace xscat {

/// Runs body(0..count-1), split across up to `threads` workers.  Each index
/// owns its output slot, so results are identical for any thread count.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

}  // namespace xscat

#endif
