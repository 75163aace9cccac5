import json
import os
from datetime import datetime

from .logging_utils import print_status


def save_results(report_text, args, command, csv_frame=None, base_dir="results"):
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    save_dir = os.path.join(base_dir, f"{command}_{timestamp}")
    os.makedirs(save_dir, exist_ok=True)

    with open(os.path.join(save_dir, "report.txt"), "w", encoding="utf-8") as f:
        f.write(report_text)

    if csv_frame is not None:
        csv_frame.to_csv(os.path.join(save_dir, f"{command}.csv"), index=False)

    config = {k: v for k, v in vars(args).items() if k != "handler"}
    with open(os.path.join(save_dir, "config.json"), "w") as f:
        json.dump(config, f, indent=2, default=str)

    print_status(f"Results saved in {save_dir}")
    return save_dir
