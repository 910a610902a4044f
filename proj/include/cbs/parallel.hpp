#ifndef CBS_PARALLEL_HPP
#define CBS_PARALLEL_HPP

#include <functional>

namespace cbs {

/** Runs fn(i) for i in [0, count). With enable=true the range is split over
 * hardware threads; each element is still computed by exactly one thread with
 * all inner reductions in fixed order, so results are bit-identical to the
 * serial sweep. */
void parallel_for(int count, const std::function<void(int)>& fn, bool enable);

} // namespace cbs

#endif
