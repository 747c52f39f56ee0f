#ifndef CLUSTERCF_CLUSTERCF_HPP
#define CLUSTERCF_CLUSTERCF_HPP

#include "clustercf/acquisition.hpp"
#include "clustercf/benchmark.hpp"
#include "clustercf/candidates.hpp"
#include "clustercf/cluster_model.hpp"
#include "clustercf/common.hpp"
#include "clustercf/csv.hpp"
#include "clustercf/dbscan.hpp"
#include "clustercf/encoding.hpp"
#include "clustercf/extra_trees.hpp"
#include "clustercf/gower.hpp"
#include "clustercf/isolation_forest.hpp"
#include "clustercf/kmeans.hpp"
#include "clustercf/mmd_critic.hpp"
#include "clustercf/model_io.hpp"
#include "clustercf/regression_forest.hpp"
#include "clustercf/scaling.hpp"
#include "clustercf/schema.hpp"
#include "clustercf/scoring.hpp"
#include "clustercf/search.hpp"
#include "clustercf/self_training.hpp"
#include "clustercf/stats.hpp"

#endif
