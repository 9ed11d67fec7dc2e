#pragma once

#include <synnet/age.hpp>
#include <synnet/annotation.hpp>
#include <synnet/chat.hpp>
#include <synnet/criteria.hpp>
#include <synnet/dga.hpp>
#include <synnet/graph.hpp>
#include <synnet/metrics.hpp>
#include <synnet/pipeline.hpp>
#include <synnet/projection.hpp>
#include <synnet/token.hpp>
