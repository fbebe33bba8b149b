#pragma once

#include "xmems/core.hpp"
#include "xmems/io.hpp"
#include "xmems/measures.hpp"
#include "xmems/mems.hpp"
#include "xmems/oracle.hpp"
#include "xmems/sampling.hpp"
