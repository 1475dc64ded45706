#pragma once

#include "momads/barrier.hpp"
#include "momads/core.hpp"
#include "momads/driver.hpp"
#include "momads/formulations.hpp"
#include "momads/io.hpp"
#include "momads/mesh.hpp"
#include "momads/metrics.hpp"
#include "momads/models.hpp"
#include "momads/problems.hpp"
#include "momads/search.hpp"
#include "momads/subsolvers.hpp"
