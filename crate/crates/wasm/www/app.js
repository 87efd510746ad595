// Wires the page to the wasm bindings: explore a scenario, render the
// report row and layer funnel, draw the best layout, plot annealing.
import init, { demo_scenario, run_exploration, annealing_trace } from "./pkg/solex_wasm.js";

const $ = (id) => document.getElementById(id);

function optionalNumber(input) {
  const text = input.value.trim();
  return text === "" ? undefined : Number(text);
}

function showError(error) {
  const box = $("error");
  box.textContent = String(error);
  box.style.display = "block";
}

function clearError() {
  $("error").style.display = "none";
}

function renderFunnel(layers, row) {
  const funnel = $("funnel");
  if (row.estimated_only) {
    funnel.innerHTML =
      "<b>Projected only:</b> the undivided space holds " +
      Number(row.estimated_count).toLocaleString("en-US") +
      " candidates — too many to enumerate, so only the estimate is reported.";
    return;
  }
  if (!layers.length) {
    funnel.textContent = "";
    return;
  }
  funnel.innerHTML = layers
    .map(
      (l) =>
        `<b>${l.name}</b>: generated ${l.generated.toLocaleString("en-US")} ` +
        `→ kept ${l.survivors.toLocaleString("en-US")}` +
        (l.removed_by_level.some((r) => r > 0)
          ? ` (removed by level 1/2/3: ${l.removed_by_level.join("/")})`
          : "")
    )
    .join("<br>");
}

function gridGeometry(canvas, grid) {
  const margin = 24;
  const cell = Math.min(
    (canvas.width - 2 * margin) / grid.width,
    (canvas.height - 2 * margin) / grid.height
  );
  const originX = (canvas.width - cell * grid.width) / 2;
  const originY = (canvas.height - cell * grid.height) / 2;
  return { cell, originX, originY };
}

function cellCenter(geometry, pos) {
  return {
    x: geometry.originX + (pos.x + 0.5) * geometry.cell,
    y: geometry.originY + (pos.y + 0.5) * geometry.cell,
  };
}

function drawGrid(response) {
  const canvas = $("grid");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const geometry = gridGeometry(canvas, response.grid);
  const { cell, originX, originY } = geometry;

  ctx.strokeStyle = "#d9dde4";
  ctx.lineWidth = 1;
  for (let x = 0; x <= response.grid.width; x++) {
    for (let y = 0; y <= response.grid.height; y++) {
      ctx.strokeRect(originX + x * cell, originY + y * cell, cell, cell);
    }
  }

  // Previous placement, ghosted for comparison.
  if (response.current_layout) {
    ctx.setLineDash([4, 4]);
    ctx.strokeStyle = "#9aa3b2";
    ctx.fillStyle = "#9aa3b2";
    ctx.font = `${Math.round(cell / 4)}px system-ui`;
    ctx.textAlign = "center";
    for (const [id, pos] of Object.entries(response.current_layout)) {
      const c = cellCenter(geometry, pos);
      ctx.strokeRect(c.x - cell * 0.38, c.y - cell * 0.38, cell * 0.76, cell * 0.76);
      ctx.fillText(id, c.x, c.y + cell * 0.31);
    }
    ctx.setLineDash([]);
  }

  const best = response.best;
  if (!best) {
    $("solution").textContent = "No evaluated solution to draw.";
    return;
  }

  // Transport path along the order's step sequence.
  const layout = best.solution.layout;
  const path = best.solution.config.assignments.map((a) => layout[a.module]);
  ctx.strokeStyle = "#f59e0b";
  ctx.lineWidth = 3;
  ctx.beginPath();
  path.forEach((pos, i) => {
    const c = cellCenter(geometry, pos);
    if (i === 0) ctx.moveTo(c.x, c.y);
    else ctx.lineTo(c.x, c.y);
  });
  ctx.stroke();

  // Chosen placement.
  ctx.font = `bold ${Math.round(cell / 4)}px system-ui`;
  ctx.textAlign = "center";
  for (const [id, pos] of Object.entries(layout)) {
    const c = cellCenter(geometry, pos);
    ctx.fillStyle = "#dbeafe";
    ctx.strokeStyle = "#2563eb";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.roundRect(c.x - cell * 0.34, c.y - cell * 0.34, cell * 0.68, cell * 0.68, 8);
    ctx.fill();
    ctx.stroke();
    ctx.fillStyle = "#1f2430";
    ctx.fillText(id, c.x, c.y + cell * 0.07);
  }

  const r = best.result;
  const speeds = best.solution.params.map((p) => p.speed_factor.toFixed(2)).join(", ");
  $("solution").innerHTML =
    `<b>Scalar ${best.scalar.toFixed(4)}</b> — makespan ${r.makespan_s.toFixed(1)} s, ` +
    `cost ${r.cost.toFixed(3)}, energy ${r.energy_kwh.toFixed(3)} kWh; ` +
    `speed factors [${speeds}]. Dashed squares show the previous placement, ` +
    `the orange line the part's transport path.`;
}

function drawTrace(response) {
  const canvas = $("trace");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const trace = response.trace;
  const margin = { left: 46, right: 12, top: 10, bottom: 22 };
  const w = canvas.width - margin.left - margin.right;
  const h = canvas.height - margin.top - margin.bottom;
  const values = trace.flatMap((t) => [t.current, t.best]);
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const spanY = hi - lo || 1;
  const x = (i) => margin.left + (w * i) / Math.max(trace.length - 1, 1);
  const y = (v) => margin.top + h * (1 - (v - lo) / spanY);

  ctx.strokeStyle = "#d9dde4";
  ctx.strokeRect(margin.left, margin.top, w, h);
  ctx.fillStyle = "#68707f";
  ctx.font = "11px system-ui";
  ctx.textAlign = "left";
  ctx.fillText(hi.toFixed(3), 2, margin.top + 10);
  ctx.fillText(lo.toFixed(3), 2, margin.top + h);
  ctx.textAlign = "center";
  ctx.fillText("proposals →", margin.left + w / 2, canvas.height - 6);

  const line = (key, style, width) => {
    ctx.strokeStyle = style;
    ctx.lineWidth = width;
    ctx.beginPath();
    trace.forEach((t, i) => {
      if (i === 0) ctx.moveTo(x(i), y(t[key]));
      else ctx.lineTo(x(i), y(t[key]));
    });
    ctx.stroke();
  };
  line("current", "#c3c9d4", 1);
  line("best", "#2563eb", 2);

  $("traceinfo").innerHTML =
    `<b>Best scalar ${response.best_value.toFixed(4)}</b> after ` +
    `${response.proposals} proposals (${response.evaluations} simulations) — ` +
    `gray: current objective, blue: best so far.`;
}

async function main() {
  await init();
  $("scenario").value = demo_scenario();

  $("explore").addEventListener("click", () => {
    clearError();
    const button = $("explore");
    button.disabled = true;
    try {
      const response = JSON.parse(
        run_exploration(
          $("scenario").value,
          $("mode").value,
          Number($("seed").value) || 0,
          optionalNumber($("topk")),
          optionalNumber($("cost"))
        )
      );
      $("report").textContent = response.table.trimEnd();
      renderFunnel(response.layers, response.row);
      drawGrid(response);
    } catch (error) {
      showError(error);
    } finally {
      button.disabled = false;
    }
  });

  $("anneal").addEventListener("click", () => {
    clearError();
    const button = $("anneal");
    button.disabled = true;
    try {
      const response = JSON.parse(
        annealing_trace($("scenario").value, Number($("seed").value) || 0)
      );
      drawTrace(response);
    } catch (error) {
      showError(error);
    } finally {
      button.disabled = false;
    }
  });
}

main().catch(showError);
