"""
Excel export of a comparison summary.

The sheet has a merged title row, a header row and one row per architecture with the test
accuracy as "mean ± std" (percent), the mean and standard deviation as numbers, the parameter
count and the number of rounds.
"""

from openpyxl import Workbook
from openpyxl.styles import Alignment, Border, Font, NamedStyle, Side
from openpyxl.utils import range_boundaries

from median_gnn.files import atomic_save_workbook

SUMMARY_TITLE = "Test accuracy over rounds"
SUMMARY_HEADERS = ["Architecture", "Accuracy (%)", "Mean", "Std", "Parameters", "Rounds"]
FIRST_DATA_ROW = 3


def is_cell_merged(worksheet, cell):
    """
    Checks if a specific cell is merged in the worksheet.

    Args:
        worksheet (openpyxl.worksheet.worksheet.Worksheet): The worksheet object.
        cell (str): The cell reference (e.g., "B3").

    Returns:
        bool: True if the cell is merged, False otherwise.
    """
    for merged_range in worksheet.merged_cells.ranges:
        min_col, min_row, max_col, max_row = range_boundaries(str(merged_range))
        cell_col, cell_row = range_boundaries(cell + ":" + cell)[0:2]
        if min_col <= cell_col <= max_col and min_row <= cell_row <= max_row:
            return True
    return False


def format_row(worksheet, row):
    """
    Formats one summary row: thin borders on every cell, centered values except the
    architecture label, and a 4-decimal number format on the mean and std columns.

    Args:
        worksheet (openpyxl.worksheet.worksheet.Worksheet): The summary worksheet.
        row (int): The row index.
    """
    border_side = Side(style="thin")
    cell_border = Border(top=border_side, bottom=border_side, left=border_side, right=border_side)
    cell_vert_align = Alignment(vertical="center")
    cell_all_align = Alignment(vertical="center", horizontal="center")

    accuracy_style = NamedStyle(name="accuracyStyle", number_format="0.0000")
    if "accuracyStyle" not in worksheet.parent.named_styles:
        worksheet.parent.add_named_style(accuracy_style)

    # Number formatting
    worksheet[f"C{row}"].style = "accuracyStyle"
    worksheet[f"D{row}"].style = "accuracyStyle"

    for letter in ["A", "B", "C", "D", "E", "F"]:
        worksheet[f"{letter}{row}"].border = cell_border
        worksheet[f"{letter}{row}"].alignment = cell_vert_align if letter == "A" else cell_all_align


def summary_workbook(summary):
    """
    Builds the summary workbook.

    Args:
        summary (list[SummaryRow]): One row per architecture.

    Returns:
        openpyxl.Workbook: A workbook with a single "Summary" sheet.
    """
    workbook = Workbook()
    worksheet = workbook.active
    worksheet.title = "Summary"

    worksheet["A1"] = SUMMARY_TITLE
    worksheet["A1"].font = Font(bold=True)
    worksheet["A1"].alignment = Alignment(horizontal="center")
    worksheet.merge_cells(start_row=1, start_column=1, end_row=1, end_column=len(SUMMARY_HEADERS))

    for column, header in enumerate(SUMMARY_HEADERS, start=1):
        cell = worksheet.cell(row=2, column=column, value=header)
        cell.font = Font(bold=True)
    format_row(worksheet, 2)

    for row, line in enumerate(summary, start=FIRST_DATA_ROW):
        values = [
            line.architecture,
            line.accuracy_text,
            line.mean_accuracy,
            line.std_accuracy,
            line.parameters,
            line.rounds,
        ]
        for column, value in enumerate(values, start=1):
            worksheet.cell(row=row, column=column, value=value)
        format_row(worksheet, row)

    worksheet.column_dimensions["A"].width = 22
    worksheet.column_dimensions["B"].width = 18
    return workbook


def write_summary_workbook(summary, path):
    """Builds `summary_workbook()` and saves it atomically to path."""
    return atomic_save_workbook(summary_workbook(summary), path)
