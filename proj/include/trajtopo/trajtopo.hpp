#pragma once

#include "trajtopo/csv.hpp"
#include "trajtopo/distance.hpp"
#include "trajtopo/embedding.hpp"
#include "trajtopo/error.hpp"
#include "trajtopo/features.hpp"
#include "trajtopo/forest.hpp"
#include "trajtopo/oracle.hpp"
#include "trajtopo/parallel.hpp"
#include "trajtopo/persistence.hpp"
#include "trajtopo/pipeline.hpp"
#include "trajtopo/report.hpp"
#include "trajtopo/rng.hpp"
#include "trajtopo/split.hpp"
#include "trajtopo/synthetic.hpp"
#include "trajtopo/trajectory.hpp"
