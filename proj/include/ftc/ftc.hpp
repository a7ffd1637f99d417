#pragma once

// Everything except the HTTP layer (client.hpp, mock_server.hpp, runner.hpp),
// which pulls in the vendored httplib.

#include "ftc/cache.hpp"
#include "ftc/core.hpp"
#include "ftc/errors.hpp"
#include "ftc/freelogic.hpp"
#include "ftc/label.hpp"
#include "ftc/meteor.hpp"
#include "ftc/metrics.hpp"
#include "ftc/mock.hpp"
#include "ftc/oracle.hpp"
#include "ftc/pipeline.hpp"
#include "ftc/protocol.hpp"
#include "ftc/report.hpp"
#include "ftc/rewrite.hpp"
#include "ftc/sensitivity.hpp"
#include "ftc/stats.hpp"
#include "ftc/stem.hpp"
#include "ftc/text.hpp"
