// Browser wiring: hash router, API client, and the three.js render loop.
// All domain logic lives in the renderless modules next to this file.

import * as THREE from "three";
import { GLTFLoader } from "three/examples/jsm/loaders/GLTFLoader.js";

import { AdvancedConditionBuilder } from "./advanced.js";
import { ApiClient } from "./api.js";
import { ComponentFormModel } from "./adminForm.js";
import { visibleEntries, type Role } from "./home.js";
import { escapeHtml, h, raw } from "./render.js";
import { SparePartDialog } from "./spareParts.js";
import { SolutionProgress } from "./technician.js";
import { CameraRig, ExtruderScene, type Axis } from "./viewer.js";
import { QUESTIONS, SearchWizard } from "./wizard.js";
import { localName, type ExtruderView } from "./types.js";

const API_BASE = (window as any).EXTRUCAT_API ?? "http://127.0.0.1:8742";

function tokenRole(): Role {
  const role = localStorage.getItem("extrucat-role");
  return role === "admin" || role === "customer" ? role : "anonymous";
}

function client(): ApiClient {
  return new ApiClient({
    baseUrl: API_BASE,
    token: localStorage.getItem("extrucat-token"),
  });
}

const app = document.getElementById("app")!;

function mount(html: string): void {
  app.innerHTML = html;
}

// -- home ---------------------------------------------------------------------

function renderHome(): void {
  const entries = visibleEntries(tokenRole())
    .map(
      (entry) =>
        h`<button class="entry" data-target="${entry.id}">${entry.title}</button>`,
    )
    .join("");
  mount(h`
    <h1>Extruder services</h1>
    <nav>${raw(entries)}</nav>
    <details>
      <summary>Sign in</summary>
      <input id="token" placeholder="access token" value="${
        localStorage.getItem("extrucat-token") ?? ""
      }">
      <select id="role">
        <option value="anonymous">anonymous</option>
        <option value="customer">customer</option>
        <option value="admin">admin</option>
      </select>
      <button id="signin">Use</button>
    </details>
  `);
  app.querySelectorAll<HTMLButtonElement>("button.entry").forEach((button) => {
    button.onclick = () => {
      location.hash = `#/${button.dataset.target}`;
    };
  });
  (app.querySelector("#signin") as HTMLButtonElement).onclick = () => {
    localStorage.setItem(
      "extrucat-token",
      (app.querySelector("#token") as HTMLInputElement).value,
    );
    localStorage.setItem(
      "extrucat-role",
      (app.querySelector("#role") as HTMLSelectElement).value,
    );
    renderHome();
  };
}

// -- catalogue and 3D view -------------------------------------------------------

async function renderCatalogue(): Promise<void> {
  const { extruders } = await client().listExtruders();
  const rows = extruders
    .map(
      (e) => h`
      <tr>
        <td>${e.name}</td><td>${e.manufacturer}</td><td>${e.production}</td>
        <td><button data-view="${e.id}">3D view</button></td>
      </tr>`,
    )
    .join("");
  mount(h`
    <h1>Catalogue</h1>
    <table>
      <thead><tr><th>Model</th><th>Manufacturer</th><th>Production</th><th></th></tr></thead>
      <tbody>${raw(rows)}</tbody>
    </table>
    <p><a href="#/">Back</a></p>
  `);
  app.querySelectorAll<HTMLButtonElement>("button[data-view]").forEach((button) => {
    button.onclick = () => renderViewer(extruders.find((e) => e.id === button.dataset.view)!);
  });
}

function renderViewer(extruder: ExtruderView): void {
  mount(h`
    <h1>${extruder.name}</h1>
    <div id="cuts">
      ${raw(
        (["x", "y", "z"] as Axis[])
          .map(
            (axis) =>
              h`<label>${axis}
                <input type="range" min="0" max="100" value="100" data-axis="${axis}">
              </label>`,
          )
          .join(""),
      )}
    </div>
    <canvas id="view" width="960" height="540"></canvas>
    <aside id="selection">Select a component</aside>
    <form id="lead" hidden>
      <input name="name" placeholder="Name" required>
      <input name="email" placeholder="Email" required>
      <textarea name="message" placeholder="What would you like to know?"></textarea>
      <button>Request more information</button>
    </form>
    <p><a href="#/catalogue">Back to catalogue</a></p>
  `);

  const canvas = document.getElementById("view") as HTMLCanvasElement;
  const renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
  renderer.localClippingEnabled = true;
  const sceneManager = new ExtruderScene(extruder);
  const rig = new CameraRig(canvas.width / canvas.height);
  const loader = new GLTFLoader();

  let pending = 0;
  for (const part of extruder.parts) {
    if (!part.model || part.model.format !== "glTF") continue;
    pending += 1;
    loader.load(`${API_BASE}/${part.model.file_path}`, (gltf) => {
      sceneManager.addComponent(part, gltf.scene);
      pending -= 1;
      if (pending === 0) rig.fit(sceneManager.bounds());
    });
  }

  app.querySelectorAll<HTMLInputElement>("#cuts input").forEach((slider) => {
    slider.oninput = () => {
      sceneManager.setCut(slider.dataset.axis as Axis, Number(slider.value) / 100);
    };
  });

  let dragging = false;
  canvas.onmousedown = () => (dragging = true);
  window.onmouseup = () => (dragging = false);
  canvas.onmousemove = (event) => {
    if (!dragging) return;
    if (event.shiftKey) {
      rig.pan(-event.movementX * 0.01, event.movementY * 0.01);
    } else {
      rig.rotate(event.movementX * 0.005, -event.movementY * 0.005);
    }
  };
  canvas.onwheel = (event) => {
    event.preventDefault();
    rig.zoom(event.deltaY > 0 ? 1.1 : 0.9);
  };

  const raycaster = new THREE.Raycaster();
  canvas.onclick = (event) => {
    const rect = canvas.getBoundingClientRect();
    const pointer = new THREE.Vector2(
      ((event.clientX - rect.left) / rect.width) * 2 - 1,
      -((event.clientY - rect.top) / rect.height) * 2 + 1,
    );
    raycaster.setFromCamera(pointer, rig.camera);
    const hit = raycaster.intersectObjects(sceneManager.scene.children, true)[0];
    const componentId = hit ? sceneManager.componentOf(hit.object) : null;
    const info = sceneManager.select(componentId);
    const panel = document.getElementById("selection")!;
    const form = document.getElementById("lead") as HTMLFormElement;
    if (info) {
      panel.innerHTML = h`
        <strong>${info.type}</strong><br>Model: ${info.model}<br>Brand: ${info.brand}`;
      form.hidden = false;
    } else {
      panel.textContent = "Select a component";
      form.hidden = true;
    }
  };

  (document.getElementById("lead") as HTMLFormElement).onsubmit = async (event) => {
    event.preventDefault();
    const form = event.target as HTMLFormElement;
    const data = new FormData(form);
    await client().submitInfoRequest({
      name: String(data.get("name")),
      email: String(data.get("email")),
      message: String(data.get("message")),
      extruder: extruder.id,
    });
    form.innerHTML = "<p>Thanks, a sales representative will reach out.</p>";
  };

  const animate = () => {
    requestAnimationFrame(animate);
    renderer.render(sceneManager.scene, rig.camera);
  };
  animate();
}

// -- search ---------------------------------------------------------------------------

async function renderSearch(): Promise<void> {
  const wizard = new SearchWizard();
  const builder = new AdvancedConditionBuilder(client());

  const step = () => {
    const question = wizard.current;
    if (!question) {
      void finish();
      return;
    }
    const inputs = question.fields
      .map(
        (field) =>
          h`<label>${field.label} (${field.unit})
             <input name="${field.name}" type="number" step="any"></label>`,
      )
      .join("");
    mount(h`
      <h1>Searching module</h1>
      <p>${question.text}</p>
      <form id="question">${raw(inputs)}
        <button type="submit">Next</button>
        <button type="button" id="skip">Skip</button>
      </form>
      <p><a href="#/">Back</a></p>
    `);
    (document.getElementById("question") as HTMLFormElement).onsubmit = (event) => {
      event.preventDefault();
      const data = new FormData(event.target as HTMLFormElement);
      const values: Record<string, number> = {};
      for (const field of question.fields) {
        values[field.name] = Number(data.get(field.name));
      }
      try {
        wizard.answer(values);
      } catch (error) {
        alert((error as Error).message);
        return;
      }
      step();
    };
    (document.getElementById("skip") as HTMLButtonElement).onclick = () => {
      wizard.skip();
      step();
    };
  };

  const finish = async () => {
    mount(h`
      <h1>Searching module</h1>
      <button id="add-condition">Add advanced condition</button>
      <button id="run">Search</button>
      <div id="conditions"></div>
      <div id="results"></div>
      <p><a href="#/">Back</a></p>
    `);
    (document.getElementById("add-condition") as HTMLButtonElement).onclick = () =>
      void renderAdvanced();
    (document.getElementById("run") as HTMLButtonElement).onclick = async () => {
      const problems = wizard.validate();
      if (problems.length) {
        alert(problems.join("\n"));
        return;
      }
      const { extruders } = await client().search(wizard.toSearchParams());
      const rows = extruders
        .map((e) => h`<li>${e.name} (${e.manufacturer}) — ${e.production}</li>`)
        .join("");
      document.getElementById("results")!.innerHTML =
        extruders.length === 0 ? "<p>No machine matches.</p>" : `<ul>${rows}</ul>`;
    };
  };

  const renderAdvanced = async () => {
    await builder.load();
    const rows = builder
      .treeRows()
      .map(
        (row) =>
          h`<div style="margin-left:${row.depth * 16}px">
             <button data-pick="${row.iri}">${row.label}</button></div>`,
      )
      .join("");
    document.getElementById("conditions")!.innerHTML = h`
      <h2>Component tree</h2>${raw(rows)}
      <div id="specializations"></div>
      <div id="properties"></div>
      <button id="apply" hidden>Add condition</button>
    `;
    document
      .querySelectorAll<HTMLButtonElement>("#conditions button[data-pick]")
      .forEach((button) => {
        button.onclick = async () => {
          await builder.selectComponent(button.dataset.pick!);
          paintPanels();
        };
      });

    const paintPanels = () => {
      const specializations = builder
        .specializationOptions()
        .map((s) => h`<button data-spec="${s.iri}">${s.label}</button>`)
        .join("");
      document.getElementById("specializations")!.innerHTML = h`
        <h3>Specializations</h3>${raw(specializations || "<em>none</em>")}
      `;
      const info = builder
        .infoPanel()
        .map((row) => h`<li>${row.label}: <strong>${row.value}</strong></li>`)
        .join("");
      const refinements = builder
        .refinementPanel()
        .map(
          (row) => h`
          <label>${row.label}
            <select data-prop="${row.property}">
              <option value="">(any)</option>
              ${raw(
                row.candidates
                  .map(
                    (candidate) =>
                      h`<option ${candidate === row.chosen ? "selected" : ""}>${candidate}</option>`,
                  )
                  .join(""),
              )}
            </select>
          </label>`,
        )
        .join("");
      document.getElementById("properties")!.innerHTML = h`
        <h3>Information</h3><ul>${raw(info)}</ul>
        <h3>Refinement</h3>${raw(refinements)}
      `;
      document
        .querySelectorAll<HTMLButtonElement>("button[data-spec]")
        .forEach((button) => {
          button.onclick = async () => {
            await builder.selectSpecialization(button.dataset.spec!);
            paintPanels();
          };
        });
      document.querySelectorAll<HTMLSelectElement>("select[data-prop]").forEach((select) => {
        select.onchange = () =>
          builder.chooseRefinement(select.dataset.prop!, select.value || null);
      });
      (document.getElementById("apply") as HTMLButtonElement).hidden = false;
      (document.getElementById("apply") as HTMLButtonElement).onclick = () => {
        wizard.advanced.push(builder.toCondition());
        document.getElementById("conditions")!.innerHTML = h`
          <p>${wizard.advanced.length} advanced condition(s) added.</p>`;
      };
    };
  };

  step();
}

// -- technician -------------------------------------------------------------------------

async function renderTechnician(): Promise<void> {
  const { extruders } = await client().myExtruders();
  const rows = extruders
    .map(
      (e) => h`<li>${e.name} <em>(${e.acquisition})</em>
        ${raw(
          e.parts
            .map((p) => h`<button data-comp="${p.id}" data-ext="${e.id}">${p.label}</button>`)
            .join(""),
        )}</li>`,
    )
    .join("");
  mount(h`
    <h1>Virtual technician</h1>
    <ul>${raw(rows)}</ul>
    <div id="workbench"></div>
    <p><a href="#/">Back</a></p>
  `);
  app.querySelectorAll<HTMLButtonElement>("button[data-comp]").forEach((button) => {
    button.onclick = () => void openComponent(button.dataset.ext!, button.dataset.comp!);
  });

  const openComponent = async (extruder: string, component: string) => {
    const api = client();
    const { solutions } = await api.solutionsFor(component);
    const progress = new SolutionProgress(api, extruder, component);
    const dialog = new SparePartDialog(api, component);
    const bench = document.getElementById("workbench")!;

    const paint = () => {
      const active = progress.activeSolution;
      const list = solutions
        .map((s) => h`<button data-sol="${s.id}">${s.title}</button>`)
        .join("");
      const steps = active
        ? active.steps
            .map(
              (step, index) => h`
            <li>
              <input type="checkbox" data-step="${index}"
                ${progress.isCompleted(index) ? "checked disabled" : ""}> ${step}
            </li>`,
            )
            .join("")
        : "";
      const dialogHtml =
        dialog.state.kind === "order"
          ? h`<p>Order <strong>${dialog.state.orderId}</strong> placed
               (${dialog.state.source}, ${dialog.state.status}).</p>`
          : dialog.state.kind === "providers"
            ? h`<p>Not on the shelf; pick a provider:</p>
               ${raw(
                 dialog.state.providers
                   .map(
                     (p) =>
                       h`<button data-provider="${p.id}">${p.name} (${p.count} in stock)</button>`,
                   )
                   .join("") || "<em>No provider has stock.</em>",
               )}`
            : dialog.state.kind === "error"
              ? h`<p>Request failed: ${dialog.state.message}</p>`
              : "";
      bench.innerHTML = h`
        <h2>${localName(component)}</h2>
        <div>${raw(list || "<em>No solutions for this component.</em>")}</div>
        <ol>${raw(steps)}</ol>
        <button id="escalate">Open support ticket</button>
        <button id="spare" ${dialog.busy ? "disabled" : ""}>Request spare part</button>
        <div id="dialog">${raw(dialogHtml)}</div>
      `;
      bench.querySelectorAll<HTMLButtonElement>("button[data-sol]").forEach((button) => {
        button.onclick = () => {
          progress.viewSolution(solutions.find((s) => s.id === button.dataset.sol)!);
          paint();
        };
      });
      bench.querySelectorAll<HTMLInputElement>("input[data-step]").forEach((checkbox) => {
        checkbox.onchange = () => {
          progress.completeStep(Number(checkbox.dataset.step));
          paint();
        };
      });
      (bench.querySelector("#escalate") as HTMLButtonElement).onclick = async () => {
        const ticket = await progress.escalate("no solution worked");
        bench.innerHTML = h`<p>Ticket <strong>${ticket.id}</strong> opened with
          ${ticket.history.length} recorded action(s).</p>`;
      };
      (bench.querySelector("#spare") as HTMLButtonElement).onclick = async () => {
        await dialog.request();
        paint();
      };
      bench.querySelectorAll<HTMLButtonElement>("button[data-provider]").forEach((button) => {
        button.onclick = async () => {
          await dialog.orderFromProvider(button.dataset.provider!);
          paint();
        };
      });
    };
    paint();
  };
}

// -- admin ------------------------------------------------------------------------------------

async function renderAdmin(): Promise<void> {
  const { extruders } = await client().listExtruders();
  mount(h`
    <h1>Admin zone</h1>
    <ul>${raw(
      extruders
        .map(
          (e) => h`<li>${e.name}
            <button data-hide="${e.id}">Disable</button>
            <button data-del="${e.id}">Delete</button></li>`,
        )
        .join(""),
    )}</ul>
    <h2>New component form (schema-driven)</h2>
    <input id="cls" placeholder="Component class, e.g. Motor">
    <button id="load-schema">Load form</button>
    <div id="component-form"></div>
    <p><a href="#/">Back</a></p>
  `);
  app.querySelectorAll<HTMLButtonElement>("button[data-hide]").forEach((button) => {
    button.onclick = async () => {
      await client().setVisible(button.dataset.hide!, false);
      renderAdmin();
    };
  });
  app.querySelectorAll<HTMLButtonElement>("button[data-del]").forEach((button) => {
    button.onclick = async () => {
      await client().deleteExtruder(button.dataset.del!);
      renderAdmin();
    };
  });
  (document.getElementById("load-schema") as HTMLButtonElement).onclick = async () => {
    const cls = (document.getElementById("cls") as HTMLInputElement).value;
    const schema = await client().formSchema(cls);
    const model = new ComponentFormModel(schema);
    const container = document.getElementById("component-form")!;
    const paint = () => {
      const measureOptions = model
        .measureTypeOptions()
        .map((m) => h`<option value="${m.iri}">${m.label}</option>`)
        .join("");
      container.innerHTML = h`
        <h3>${schema.label}</h3>
        ${raw(
          model
            .basicFields()
            .map((f) => h`<input placeholder="${f}" data-basic="${f}">`)
            .join(""),
        )}
        <fieldset>
          <legend>Features</legend>
          <select id="measure">${raw(measureOptions)}</select>
          <select id="unit"></select>
          <input id="value" type="number" step="any" placeholder="value">
          <select id="qualifier">
            <option>exact</option><option>minimum</option><option>maximum</option>
          </select>
          <button id="add-feature">Add</button>
          <ul>${raw(
            model.features
              .map((f) => h`<li>${f.qualifier} ${f.value} (${localName(f.unit)})</li>`)
              .join(""),
          )}</ul>
        </fieldset>
      `;
      const measureSelect = container.querySelector("#measure") as HTMLSelectElement;
      const unitSelect = container.querySelector("#unit") as HTMLSelectElement;
      const paintUnits = () => {
        // The unit select only ever offers the schema's per-measure-type list.
        unitSelect.innerHTML = model
          .unitOptionsFor(measureSelect.value)
          .map((u) => h`<option value="${u.iri}">${u.label} (${u.symbol})</option>`)
          .join("");
      };
      measureSelect.onchange = paintUnits;
      paintUnits();
      (container.querySelector("#add-feature") as HTMLButtonElement).onclick = () => {
        model.addFeature({
          measure_type: measureSelect.value,
          unit: unitSelect.value,
          value: Number((container.querySelector("#value") as HTMLInputElement).value),
          qualifier: (container.querySelector("#qualifier") as HTMLSelectElement)
            .value as "exact" | "minimum" | "maximum",
        });
        paint();
      };
    };
    paint();
  };
}

// -- router ------------------------------------------------------------------------------------

function route(): void {
  const hash = location.hash.replace(/^#\//, "");
  if (hash === "catalogue") void renderCatalogue();
  else if (hash === "search") void renderSearch();
  else if (hash === "technician") void renderTechnician();
  else if (hash === "admin") void renderAdmin();
  else renderHome();
}

window.addEventListener("hashchange", route);
route();
