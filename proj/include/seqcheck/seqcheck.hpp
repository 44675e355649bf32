#pragma once

#include "seqcheck/deletion.hpp"
#include "seqcheck/hash_ring.hpp"
#include "seqcheck/limited.hpp"
#include "seqcheck/metrics.hpp"
#include "seqcheck/placement.hpp"
#include "seqcheck/prng.hpp"
#include "seqcheck/replication.hpp"
#include "seqcheck/sim_cluster.hpp"
#include "seqcheck/types.hpp"
