// page.hpp — Static viewer page emission: a self-contained HTML file that
// renders a GLB through the <model-viewer> web component with AR enabled.
#pragma once

#include <string>

#include "armesh/core.hpp"

namespace armesh {

namespace page_detail {

inline std::string html_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace page_detail

/// Render the embedded page template with the title and (relative) model path
/// substituted. Same inputs give byte-identical output.
inline std::string viewer_page_html(const std::string& title, const std::string& model_path) {
  const std::string t = page_detail::html_escape(title);
  const std::string m = page_detail::html_escape(model_path);
  std::string html;
  html += "<!DOCTYPE html>\n";
  html += "<html lang=\"en\">\n";
  html += "<head>\n";
  html += "<meta charset=\"utf-8\">\n";
  html += "<meta name=\"viewport\" content=\"width=device-width, initial-scale=1\">\n";
  html += "<title>" + t + "</title>\n";
  html += "<script type=\"module\" src=\"https://ajax.googleapis.com/ajax/libs/model-viewer/3.5.0/"
          "model-viewer.min.js\"></script>\n";
  html += "<style>\n";
  html += "body { margin: 0; font-family: sans-serif; background: #fafafa; }\n";
  html += "h1 { text-align: center; font-size: 1.2rem; padding: 0.8rem 0 0 0; color: #333; }\n";
  html += "model-viewer { width: 100vw; height: 85vh; }\n";
  html += "</style>\n";
  html += "</head>\n";
  html += "<body>\n";
  html += "<h1>" + t + "</h1>\n";
  html += "<model-viewer src=\"" + m + "\" alt=\"" + t + "\" ar ar-modes=\"webxr scene-viewer quick-look\" "
          "camera-controls autoplay shadow-intensity=\"1\"></model-viewer>\n";
  html += "</body>\n";
  html += "</html>\n";
  return html;
}

}  // namespace armesh
