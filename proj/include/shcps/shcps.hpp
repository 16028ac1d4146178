#pragma once

#include "shcps/error.hpp"
#include "shcps/utility.hpp"
#include "shcps/kb.hpp"
#include "shcps/kb_io.hpp"
#include "shcps/guarantees.hpp"
#include "shcps/search.hpp"
#include "shcps/generators.hpp"
#include "shcps/healer.hpp"
#include "shcps/report.hpp"
#include "shcps/bench.hpp"
