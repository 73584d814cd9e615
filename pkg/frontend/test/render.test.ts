// Renderer tests over the canonical fixtures the service produces.

import { describe, expect, it } from "vitest";

import {
  escapeHtml,
  remainingSeconds,
  renderMapGrid,
  renderPendingCard,
  renderPendingCards,
  renderPrefs,
  renderSmsLog,
  renderTaskTable,
} from "../src/render.js";
import { MapPayload, PendingCard, SmsRow, TaskRow } from "../src/types.js";

const TASK_ROWS: TaskRow[] = [
  [0, "7/5/2010", "7:00:00 PM", "Prepare hamburger", "Normal", "Done"],
  [1, "7/5/2010", "7:00:00 PM", "Prepare salad", "Normal", "Done"],
  [2, "7/5/2010", "8:30:00 PM", "Wash dishes", "Normal", "Done"],
  [3, "7/5/2010", "9:11:00 PM", "Monitor Emergency", "Normal", "In progress"],
  [4, "7/6/2010", "7:00:00 PM", "Wake Up Alarm", "Normal", "Queued"],
  [5, "7/6/2010", "8:00:00 PM", "Prepare Breakfast Egg", "Normal", "Queued"],
  [6, "7/6/2010", "8:00:00 PM", "Prepare hot tee", "Normal", "Queued"],
  [7, "7/6/2010", "9:00:00 PM", "Monitor the baby", "High", "Queued"],
  [8, "7/6/2010", "9:00:00 PM", "Monitor Emergency", "High", "Queued"],
  [9, "7/6/2010", "10:00:00 PM", "Feed the baby (Milk)", "High", "Queued"],
  [10, "7/6/2010", "11:00:00 PM", "Play with the baby", "Normal", "Queued"],
];

const SMS_ROWS: SmsRow[] = [
  [
    "17 / 02 / 2010",
    "01:19 PM",
    "Door ring: Your Mama",
    "Call me and put me on speaker",
    "I called you and put you on speaker",
  ],
  ["18 / 02 / 2010", "03:53 PM", "Phone ring: Your Sister", "No action received", "I take a message"],
  [
    "19 / 02 / 2010",
    "10:33 PM",
    "Emergency: Fire in the kitchen",
    "No action needed",
    "I call the firestation. I take the baby and go outdoors",
  ],
];

const CARD: PendingCard = {
  message_id: 0,
  info: "Door ring: Your Mama",
  options: [
    { number: 1, label: "Let them in", default: false },
    { number: 2, label: "Take a message", default: true },
    { number: 3, label: "Call me and put me on speaker", default: false },
  ],
  sent_at: "2010-02-17 13:19:00",
  deadline: "2010-02-17 13:21:00",
  remaining_s: 120,
  window_s: 120,
};

describe("task table", () => {
  it("renders every fixture row verbatim", () => {
    const html = renderTaskTable(TASK_ROWS);
    for (const row of TASK_ROWS) {
      for (const cell of row.slice(1)) {
        expect(html).toContain(String(cell));
      }
    }
    expect(html.match(/<tr>/g)).toHaveLength(12); // header + 11 rows
  });

  it("keeps the five named columns", () => {
    const html = renderTaskTable([]);
    for (const column of ["ID", "Date", "Time", "Task", "Priority", "Progress"]) {
      expect(html).toContain(`<th>${column}</th>`);
    }
  });
});

describe("sms log", () => {
  it("renders the three-day fixture verbatim", () => {
    const html = renderSmsLog(SMS_ROWS);
    expect(html).toContain("Door ring: Your Mama");
    expect(html).toContain("I called you and put you on speaker");
    expect(html).toContain("No action received");
    expect(html).toContain("I call the firestation. I take the baby and go outdoors");
  });
});

describe("pending cards", () => {
  it("numbers the option buttons and marks the default", () => {
    const html = renderPendingCard(CARD, 120);
    expect(html).toContain("1. Let them in");
    expect(html).toContain("2. Take a message");
    expect(html).toContain("3. Call me and put me on speaker");
    expect(html).toContain('data-message="0"');
    expect(html).toContain('data-option="3"');
    expect(html.match(/class="option default"/g)).toHaveLength(1);
    expect(html).toContain("Reply within <b>120</b> s");
  });

  it("flips to the log row once the server resolves by timeout", () => {
    // Push n: a live card. Push n+1: card gone, default action logged.
    const before = renderPendingCards([CARD], "2010-02-17 13:19:00", 0);
    expect(before).toContain("Door ring: Your Mama");
    const after = renderPendingCards([], "2010-02-17 13:21:00", 0);
    expect(after).toContain("No SMS waiting");
    const log = renderSmsLog([
      ["17 / 02 / 2010", "01:19 PM", "Door ring: Your Mama", "No action received", "I take a message"],
    ]);
    expect(log).toContain("I take a message");
  });
});

describe("countdown", () => {
  it("derives remaining seconds from server deadline and server now", () => {
    expect(remainingSeconds(CARD.deadline, "2010-02-17 13:19:00", 0)).toBe(120);
    expect(remainingSeconds(CARD.deadline, "2010-02-17 13:19:00", 30_000)).toBe(90);
    expect(remainingSeconds(CARD.deadline, "2010-02-17 13:20:59", 1_000)).toBe(0);
  });

  it("clamps at zero after the deadline", () => {
    expect(remainingSeconds(CARD.deadline, "2010-02-17 13:30:00", 0)).toBe(0);
    expect(remainingSeconds(CARD.deadline, "2010-02-17 13:21:00", 99_000)).toBe(0);
  });
});

describe("preferences", () => {
  it("locks emergency kinds and leaves reaction kinds editable", () => {
    const html = renderPrefs({ baby_crying: true, door_ring: true, phone_ring: false }, ["fire"]);
    expect(html).toContain('data-kind="door_ring" checked>');
    expect(html).toContain('data-kind="phone_ring">');
    expect(html).toContain('data-kind="fire" checked disabled>');
    expect(html).toContain("always delivered");
  });
});

describe("map", () => {
  const map: MapPayload = {
    width: 3,
    height: 2,
    cell_size: 0.25,
    rows: ["..#", "..."],
    locations: { kitchen: [0, 0] },
    robot: [1, 1],
    path: [
      [1, 1],
      [1, 2],
    ],
  };

  it("marks walls, locations, the robot, and the path overlay", () => {
    const html = renderMapGrid(map);
    expect(html.match(/class="cell wall"/g)).toHaveLength(1);
    expect(html).toContain('title="kitchen"');
    expect(html).toContain("robot");
    expect(html.match(/path/g)!.length).toBeGreaterThanOrEqual(2);
  });
});

describe("escaping", () => {
  it("neutralizes markup in labels", () => {
    expect(escapeHtml('<img src="x">')).toBe("&lt;img src=&quot;x&quot;&gt;");
  });
});
