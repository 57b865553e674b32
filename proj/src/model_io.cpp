/*
 * Copyright 2026 The kmbin Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <json.hpp>

#include "kmbin/learner.hpp"

namespace kmbin {

std::string save_model(const GbmModel& model) {
  nlohmann::json trees = nlohmann::json::array();
  for (const Tree& tree : model.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& n : tree.nodes) {
      if (n.is_leaf()) {
        nodes.push_back({{"value", n.value}});
      } else {
        nodes.push_back({{"feature", n.feature},
                         {"split_bin", n.split_bin},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right}});
      }
    }
    trees.push_back({{"nodes", std::move(nodes)}});
  }
  nlohmann::json doc = {{"init_score", model.init_score},
                        {"learning_rate", model.learning_rate},
                        {"loss", std::string(to_string(model.loss))},
                        {"n_features", model.n_features},
                        {"trees", std::move(trees)}};
  doc["edges"] = model.uses_bins() ? nlohmann::json::parse(save_edges(model.edges_per_feature))
                                   : nlohmann::json(nullptr);
  return doc.dump() + "\n";
}

GbmModel load_model(std::string_view text) {
  GbmModel model;
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    model.init_score = doc.at("init_score").get<double>();
    model.learning_rate = doc.at("learning_rate").get<double>();
    model.loss = parse_loss(doc.at("loss").get<std::string>());
    model.n_features = doc.at("n_features").get<std::size_t>();
    for (const auto& t : doc.at("trees")) {
      Tree tree;
      for (const auto& n : t.at("nodes")) {
        TreeNode node;
        if (n.contains("feature")) {
          node.feature = n.at("feature").get<int>();
          node.split_bin = n.at("split_bin").get<int>();
          node.threshold = n.at("threshold").get<double>();
          node.left = n.at("left").get<int>();
          node.right = n.at("right").get<int>();
        } else {
          node.value = n.at("value").get<double>();
        }
        tree.nodes.push_back(node);
      }
      const int size = static_cast<int>(tree.nodes.size());
      // Children always follow their parent, which also rules out cycles.
      for (int i = 0; i < size; ++i) {
        const TreeNode& n = tree.nodes[static_cast<std::size_t>(i)];
        if (!n.is_leaf() && (n.left <= i || n.right <= i || n.left >= size || n.right >= size ||
                             n.feature >= static_cast<int>(model.n_features))) {
          throw FitError("model parse error: malformed tree node");
        }
      }
      if (tree.nodes.empty()) throw FitError("model parse error: empty tree");
      model.trees.push_back(std::move(tree));
    }
    if (!doc.at("edges").is_null()) model.edges_per_feature = load_edges(doc.at("edges").dump());
  } catch (const nlohmann::json::exception& e) {
    throw FitError(std::string("model parse error: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FitError(std::string("model parse error: ") + e.what());
  }
  if (model.uses_bins() && model.edges_per_feature.size() != model.n_features) {
    throw FitError("model parse error: edge count does not match n_features");
  }
  return model;
}

}  // namespace kmbin
