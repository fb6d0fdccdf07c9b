#pragma once

#include <CLI11.hpp>

#include <functional>

namespace gesq::cli {

/// Registers a subcommand on `app`. The returned runner is invoked after
/// parsing when the subcommand was selected and yields the exit code.
using Runner = std::function<int()>;

Runner add_construct(CLI::App& app);
Runner add_measure(CLI::App& app);
Runner add_exact(CLI::App& app);
Runner add_figure1(CLI::App& app);
Runner add_noise_threshold(CLI::App& app);
Runner add_verify(CLI::App& app);
Runner add_reproduce(CLI::App& app);

}  // namespace gesq::cli
