#include "tabdoc/model/table.hpp"

#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tabdoc/error.hpp"
#include "tabdoc/io.hpp"

namespace tabdoc::model {
namespace {

using nlohmann::json;

std::string escape_markdown_cell(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    const char c = value[i];
    if (c == '\\' || c == '|') {
      out.push_back('\\');
      out.push_back(c);
    } else if (c == '\r') {
      if (i + 1 < value.size() && value[i + 1] == '\n') ++i;
      out += "<br>";
    } else if (c == '\n') {
      out += "<br>";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::vector<std::size_t> map_columns(const std::vector<std::string>& header, const Schema& schema) {
  if (header.size() != schema.attribute_count()) {
    throw Error(Errc::schema_mismatch, "table has " + std::to_string(header.size()) +
                                           " columns, schema has " +
                                           std::to_string(schema.attribute_count()));
  }
  std::vector<std::size_t> mapping;
  std::set<std::size_t> used;
  for (const auto& name : header) {
    auto j = schema.index_of(name);
    if (!j) throw Error(Errc::schema_mismatch, "column '" + name + "' is not in the schema");
    if (!used.insert(*j).second) throw Error(Errc::schema_mismatch, "duplicate column '" + name + "'");
    mapping.push_back(*j);
  }
  return mapping;
}

Cell cell_from_json(const json& j) {
  if (j.is_null()) return {};
  if (j.is_string()) return {j.get<std::string>(), std::nullopt};
  if (j.is_number() || j.is_boolean()) return {j.dump(), std::nullopt};
  if (j.is_object()) {
    Cell c;
    if (j.contains("value") && !j.at("value").is_null()) {
      const auto& v = j.at("value");
      c.value = v.is_string() ? v.get<std::string>() : v.dump();
    }
    if (j.contains("source") && !j.at("source").is_null()) c.source_tag = j.at("source").get<std::string>();
    return c;
  }
  throw Error(Errc::parse_error, "unsupported cell encoding: " + j.dump());
}

}  // namespace

Table::Table(std::shared_ptr<const Schema> schema, std::vector<Tuple> tuples)
    : schema_(std::move(schema)), tuples_(std::move(tuples)) {
  if (!schema_) throw Error(Errc::invalid_argument, "table without schema");
  for (std::size_t i = 0; i < tuples_.size(); ++i) {
    if (tuples_[i].cells.size() != schema_->attribute_count()) {
      throw Error(Errc::invalid_argument, "tuple " + std::to_string(i) + " has " +
                                              std::to_string(tuples_[i].cells.size()) +
                                              " cells, expected " +
                                              std::to_string(schema_->attribute_count()));
    }
  }
}

Table Table::ground_truth(std::shared_ptr<const Schema> schema, std::vector<Tuple> tuples) {
  Table t(std::move(schema), std::move(tuples));
  t.check_ground_truth();
  return t;
}

std::string Table::entity(std::size_t row) const {
  const auto& cell = at(row, schema_->key_attribute_index());
  return cell.value.value_or(std::string{});
}

void Table::check_ground_truth() const {
  if (tuples_.empty()) throw Error(Errc::invalid_argument, "ground-truth table has no tuples");
  const std::size_t key = schema_->key_attribute_index();
  std::set<std::string> keys;
  for (std::size_t i = 0; i < tuples_.size(); ++i) {
    const auto& cell = tuples_[i].cells[key];
    if (cell.is_null()) {
      throw Error(Errc::invalid_argument, "row " + std::to_string(i) + " has a NULL key");
    }
    if (!keys.insert(*cell.value).second) {
      throw Error(Errc::invalid_argument, "duplicate key '" + *cell.value + "'");
    }
  }
}

bool operator==(const Table& a, const Table& b) {
  return a.schema_->attribute_names() == b.schema_->attribute_names() && a.tuples_ == b.tuples_;
}

std::string render_markdown(const Table& table) {
  std::ostringstream out;
  const auto& attrs = table.schema().attributes();
  out << "|";
  for (const auto& a : attrs) out << " " << escape_markdown_cell(a.name) << " |";
  out << "\n|";
  for (std::size_t j = 0; j < attrs.size(); ++j) out << " --- |";
  out << "\n";
  for (const auto& t : table.tuples()) {
    out << "|";
    for (const auto& c : t.cells) {
      out << " " << (c.value ? escape_markdown_cell(*c.value) : std::string("NULL")) << " |";
    }
    out << "\n";
  }
  return out.str();
}

json to_json(const Table& table) {
  json rows = json::array();
  for (const auto& t : table.tuples()) {
    json row = json::array();
    for (const auto& c : t.cells) {
      if (c.source_tag) {
        row.push_back({{"value", c.value ? json(*c.value) : json(nullptr)}, {"source", *c.source_tag}});
      } else {
        row.push_back(c.value ? json(*c.value) : json(nullptr));
      }
    }
    rows.push_back(std::move(row));
  }
  return {{"columns", table.schema().attribute_names()}, {"rows", std::move(rows)}};
}

Table table_from_json(const json& j, std::shared_ptr<const Schema> schema) {
  try {
    const auto header = j.at("columns").get<std::vector<std::string>>();
    const auto mapping = map_columns(header, *schema);
    std::vector<Tuple> tuples;
    for (const auto& rj : j.at("rows")) {
      if (rj.size() != header.size()) {
        throw Error(Errc::parse_error, "row with " + std::to_string(rj.size()) +
                                           " cells, header has " + std::to_string(header.size()));
      }
      Tuple t;
      t.cells.resize(header.size());
      for (std::size_t k = 0; k < header.size(); ++k) t.cells[mapping[k]] = cell_from_json(rj[k]);
      tuples.push_back(std::move(t));
    }
    return Table(std::move(schema), std::move(tuples));
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("malformed table: ") + e.what());
  }
}

std::vector<std::vector<CsvField>> parse_csv_records(std::string_view text) {
  std::vector<std::vector<CsvField>> records;
  std::vector<CsvField> record;
  std::string field;
  bool in_quotes = false;
  bool quoted = false;
  bool any = false;
  auto end_field = [&] {
    record.push_back({field, quoted});
    field.clear();
    quoted = false;
  };
  auto end_record = [&] {
    end_field();
    if (!(record.size() == 1 && record[0].text.empty() && !record[0].quoted)) {
      records.push_back(std::move(record));
    }
    record.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      in_quotes = true;
      quoted = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_record();
      any = false;
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes) throw Error(Errc::parse_error, "unterminated quoted CSV field");
  if (any) end_record();
  return records;
}

Table table_from_csv(std::string_view text, std::shared_ptr<const Schema> schema) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  auto records = parse_csv_records(text);
  if (records.empty()) throw Error(Errc::parse_error, "empty CSV");
  std::vector<std::string> header;
  for (const auto& f : records[0]) header.push_back(f.text);
  const auto mapping = map_columns(header, *schema);
  std::vector<Tuple> tuples;
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != header.size()) {
      throw Error(Errc::parse_error, "CSV record " + std::to_string(r) + " has " +
                                         std::to_string(records[r].size()) + " fields");
    }
    Tuple t;
    t.cells.resize(header.size());
    for (std::size_t k = 0; k < header.size(); ++k) {
      const auto& f = records[r][k];
      if (!f.quoted && (f.text.empty() || f.text == "NULL")) continue;
      t.cells[mapping[k]].value = f.text;
    }
    tuples.push_back(std::move(t));
  }
  return Table(std::move(schema), std::move(tuples));
}

Table load_table(const std::filesystem::path& path, std::shared_ptr<const Schema> schema) {
  Table t = path.extension() == ".csv" ? table_from_csv(io::read_text(path), std::move(schema))
                                       : table_from_json(io::read_json(path), std::move(schema));
  t.check_ground_truth();
  return t;
}

}  // namespace tabdoc::model
